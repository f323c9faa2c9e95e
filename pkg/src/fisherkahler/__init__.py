"""Fisher geometry of the probability simplex and its Kaehler link to complex projective space."""

__version__ = "0.1.0"

from .simplex import (  # noqa: E402
    Curve,
    Distribution,
    TangentVector,
    center,
    expectation,
    fisher_gram,
    fisher_metric,
    make_distribution,
    normalize,
    random_point,
    random_tangent,
)
from .connections import (  # noqa: E402
    Alpha,
    VectorFieldAlongCurve,
    check_duality,
    covariant_derivative,
    exponential_derivative,
    geodesic,
    parallel_transport,
)
from .dombrowski import (  # noqa: E402
    SplitDoubleTangent,
    connector,
    phi_inverse_curve,
    split_form_Omega,
    split_J,
    split_metric_G,
)
from .projective import (  # noqa: E402
    J_FS,
    ProjectivePoint,
    ProjectiveTangent,
    chart_backward,
    chart_forward,
    fubini_study,
    transfer_tangent,
)
from .covering import (  # noqa: E402
    DeckElement,
    deck_action,
    tau,
    tau_pushforward,
    verify_pullback,
)
