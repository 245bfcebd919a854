"""critexp: exact critical exponents of words, prescribed-exponent
constructions, certified extension searches, and exponent-map dynamics."""

from ._kernels import BACKEND as kernel_backend
from .construct import (
    ConstructedPoint,
    Schedule,
    Stage,
    build_cr,
    build_near_zero,
    build_with_tm_prefix,
    extend_word,
    is_tm_factor,
    make_schedule,
)
from .dynamics import (
    X_TAU_KAPPA,
    A2nMembership,
    Cylinder,
    DyadicRational,
    HorseshoeCertificate,
    LiYorkeWitnesses,
    ProbeStatistics,
    a2n_member,
    cylinder,
    fixed_point_candidates,
    horseshoe_certificate,
    kappa2_upper_bound,
    kappa_n_upper_bound,
    kappa_sup_truncated,
    liyorke_witnesses,
    measure_probe,
    x_tau,
)
from .exponent import (
    ExtensionState,
    PowerWitness,
    critical_exponent,
    critical_exponent_oracle,
    critical_exponent_value,
    extend,
    is_power,
    max_prefix_exponent,
    prefix_exponents,
)
from .explore import (
    AchievabilityReport,
    BoundsReport,
    CounterexampleRecord,
    SearchResult,
    achievable_exponents,
    counterexample_search,
    ew_bounds,
    min_exponent_at_depth,
)
from .values import Exponent, ValidationError
from .words import (
    MU,
    FiniteWord,
    Morphism,
    StreamWord,
    delete_prefix,
    expand,
    find_subword,
    mu_power,
    negate,
    thue_morse_prefix,
    thue_morse_stream,
)

__version__ = "0.1.0"
