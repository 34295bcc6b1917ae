"""Finite-block constructions for identification via quantum channels."""

__version__ = "0.1.0"

from .errors import QidError  # noqa: E402,F401
from .quantum import (  # noqa: E402,F401
    DensityOperator,
    KrausChannel,
    SubPovm,
    born,
    make_extended_channel,
    make_identity_channel,
    make_trace_channel,
)
from .transmission import TransmissionCode, random_code  # noqa: E402,F401
from .orthogonal import orthogonalize_code  # noqa: E402,F401
from .designs import SubsetFamily, generate_family, verify_family  # noqa: E402,F401
from .idcodes import (  # noqa: E402,F401
    IdCode,
    build_loeber_code,
    build_zero_entropy_code,
    check_size_bounds,
    purify_and_extend,
    verify_id_code,
)
