"""Exception hierarchy shared by all modules."""


class QoreError(Exception):
    pass


class DomainError(QoreError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParseError(QoreError, ValueError):
    pass


class SpecError(QoreError, ValueError):
    """An Ore presentation violates a structural invariant."""


class NotExtendable(QoreError):
    """The derivation does not extend to a higher q-skew derivation."""


class NotLocallyNilpotent(QoreError):
    pass


class NotRemovable(QoreError):
    pass


class NotReorderable(QoreError):
    pass


class NoClosedForm(QoreError):
    pass
