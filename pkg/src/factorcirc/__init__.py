"""Swarm dynamics under lambda-factor circulant interaction matrices."""

from .circulant_core import (
    Diagonalization,
    FactorCirculant,
    MaskDecomposition,
    ModalSpectrum,
    diagonalize,
    dft_matrix,
    eigenvalues,
    inverse,
    mask_decompose,
    multiply,
    multiply_vector,
    principal_root,
    to_dense,
)
from .dynamics import (
    BeaconSystem,
    InvarianceReport,
    ModalState,
    SimilarityTransform,
    SwarmState,
    apply_similarity,
    check_invariance,
    embed_beacon,
    evolve_continuous,
    evolve_discrete,
    from_modal,
    step_beacon,
    step_discrete,
    to_modal,
)
from .asymptotics import (
    EllipseLimit,
    FormationPrediction,
    LimitClass,
    LimitKind,
    classify,
    dominant_modes,
    ellipse_residual,
    formation,
    predicted_state,
)
from .models import (
    CentroidGatheringParams,
    centroid_gathering,
    darboux,
    gathering_mu0_closed_form,
    normalized_gathering,
)
from .errors import (
    ConfigError,
    DegenerateFactor,
    MultiModal,
    PreconditionFailed,
    SingularSpectrum,
)

__version__ = "0.1.0"
