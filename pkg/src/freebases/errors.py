"""Domain-level failures, as opposed to malformed input (ValueError)."""


class DomainError(Exception):
    """A structurally valid input that the requested operation rejects."""


class ContractibleGraphError(DomainError):
    """Core of a contractible graph without a base vertex."""


class FoldabilityError(DomainError):
    """Foldability cannot be restored by the supported conjugations."""


class NotABasisError(DomainError):
    """A tuple of words that was required to be a free basis is not one."""


class TrivialFactorError(DomainError):
    """A construction produced a trivial or improper free factor."""
