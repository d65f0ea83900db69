"""Projected tensor-tensor products and their truncated SVDs for dense
order-3 tensors."""

from .decompositions import (
    ErrorParts,
    HosvdFactors,
    TsvdqFactors,
    TsvdqIIFactors,
    energy_for_truncation,
    hosvd,
    hosvd_matched_truncation,
    hosvd_reconstruct,
    matrix_svd_baseline,
    star_q_multirank,
    star_q_rank,
    tsvdq,
    tsvdq2,
    tsvdq2_error,
    tsvdq2_reconstruct,
    tsvdq_error,
    tsvdq_full,
    tsvdq_reconstruct,
)
from .data_io import SyntheticSpec, gen_exact_rank, gen_moving_square, gen_spectral_cube, read_pt3, write_pt3
from .errors import DegenerateInputError, FormatError, NumericError, ProjProdError, ShapeError
from .metrics import (
    CompressionReport,
    compression_ratio_exact,
    relative_error,
    storage_hosvd,
    storage_matrix_svd,
    storage_tsvdq,
    storage_tsvdq2,
)
from .star_products import (
    StarContext,
    is_f_diagonal,
    is_star_q_unitary,
    star_m_product,
    star_q_identity,
    star_q_product,
    star_q_transpose,
)
from .sweep import sweep_tsvdq
from .tensor_core import (
    facewise_product,
    frobenius_norm,
    frontal_slice,
    mode3_fold,
    mode3_product,
    mode3_unfold,
    mode_product,
    mode_unfold,
    tube,
)
from .transforms import (
    Transform,
    TransformKind,
    data_dependent_transform,
    dct_transform,
    haar_complement,
    haar_matrix,
    haar_transform,
    identity_transform,
    make_transform,
    projection_error,
    random_orthogonal_transform,
)

__version__ = "0.1.0"
