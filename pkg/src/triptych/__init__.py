"""Construct, certify and stress-test ((2,3)) quantum secret-sharing schemes."""

from .codespace import (
    CodeSpace,
    RecoveryResult,
    check_ortho2,
    from_tensor,
    permutation_code,
    purify,
    qutrit_code,
    recover,
    recovery_unitaries,
    shift_code,
    uniform_purification,
    vip_code,
)
from .errors import (
    ConstructionError,
    DimensionError,
    InvalidDensityError,
    RecoveryImpossible,
    ValidationError,
)
from .infotheory import (
    DensityMatrix,
    PureState,
    max_relative_entropy,
    mutual_information,
    partial_trace,
    relative_entropy,
    tripartite_information,
    von_neumann_entropy,
)
from .tensor_core import Tensor4, fold, multiunitarity_report, operator_norm, unfold, unitarity
from .verifier import bound_check, certify, monogamy_probe, vip_audit

__version__ = "0.1.0"
