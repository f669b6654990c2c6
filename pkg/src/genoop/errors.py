class GenoopError(Exception):
    """Base class for every error raised by this package."""


class MiniGenSyntaxError(GenoopError):
    def __init__(self, message, line=0, column=0, expected=(), source_name="<input>"):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        self.source_name = source_name
        where = f"{source_name}:{line}:{column}"
        text = f"{where}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class DeclarationError(GenoopError):
    """Duplicate classes, duplicate type parameters, duplicate members, bad supers."""


class ResolutionError(GenoopError):
    """A class or type-variable name does not resolve."""


class ArityError(GenoopError):
    pass


class WildcardError(GenoopError):
    """A wildcard appears where only proper types are allowed."""


class ShapeMismatchError(GenoopError):
    """Legacy and generic declarations do not line up member by member."""


class PartialSubstitutionError(GenoopError):
    pass
