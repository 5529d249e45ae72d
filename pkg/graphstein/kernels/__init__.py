# flake8: noqa

from ._kernels import (
    KernelSpec,
    ProductGraph,
    product_graph,
    kernel_eval,
    constant_kernel,
    gveh,
    k_step_random_walk,
    geometric_random_walk,
    check_grw_convergence,
    spectral_radius,
    grw_system,
    shortest_path_features,
    shortest_path_kernel,
    wl_features,
    wl_feature_matrix,
    weisfeiler_lehman,
    graphlet_kernel,
    gram_matrix,
    write_gram_csv,
    KERNEL_KINDS,
    CONST,
    GVEH,
    KRW,
    GRW,
    SP,
    WL,
    GLET,
    CONGLET,
)
from ._graphlets import (
    graphlet_features,
    graphlet_class_names,
    graphlet_key,
    GRAPHLET_CLASSES,
    GRAPHLET_SIZES,
)
from ._update import (
    InverseState,
    rank2_update,
    rank2_update_inplace,
    rank2_chain,
    toggled_grw_sum,
    sherman_morrison,
    SINGULAR_TOL,
)
