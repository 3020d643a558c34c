"""Exception types. Each carries a stable ``code`` string used in reports and by the CLI."""


class KCausalError(Exception):
    code = "ERROR"

    def __init__(self, message="", witness=None):
        super().__init__(message or self.code)
        self.witness = witness


class NonCoveringFamily(KCausalError, ValueError):
    code = "NON_COVERING_FAMILY"


class EmptyEventSet(KCausalError, ValueError):
    code = "EMPTY_EVENT_SET"


class OutOfRangeIndex(KCausalError, IndexError):
    code = "OUT_OF_RANGE_INDEX"


class DimensionMismatch(KCausalError, ValueError):
    code = "DIMENSION_MISMATCH"


class NotKCausal(KCausalError, ValueError):
    code = "NOT_K_CAUSAL"


class NotReflexive(KCausalError, ValueError):
    code = "NOT_REFLEXIVE"


class NotAntisymmetric(KCausalError, ValueError):
    code = "NOT_ANTISYMMETRIC"


class NotTransitive(KCausalError, ValueError):
    code = "NOT_TRANSITIVE"


class EmptySubset(KCausalError, ValueError):
    code = "EMPTY_SUBSET"


class CarrierTooLarge(KCausalError, ValueError):
    code = "CARRIER_TOO_LARGE"


class EventOutsideRegion(KCausalError, ValueError):
    code = "EVENT_OUTSIDE_REGION"


class MalformedSpec(KCausalError, ValueError):
    code = "MALFORMED_SPEC"


class RegionTooSmall(KCausalError, ValueError):
    code = "REGION_TOO_SMALL"


class SeedRequired(KCausalError, ValueError):
    code = "SEED_REQUIRED"


class UnsupportedOracle(KCausalError, ValueError):
    code = "UNSUPPORTED_ORACLE"
