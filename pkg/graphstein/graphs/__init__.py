# flake8: noqa

from ._graph import (
    Graph,
    pair_count,
    pair_index,
    pair_unindex,
    pair_arrays,
    flip_edge,
    set_edge,
    edge_count,
    degree,
    two_star_count,
    triangle_count,
    summary_statistic,
    summary_statistics,
    check_statistic_kind,
    DENSITY,
    BIDEGREE,
    COMMON_NEIGHBOURS,
    STATISTIC_KINDS,
)
from ._io import read_graph, parse_graph, format_graph, write_graph, write_graphs
from ._io import decode_text
from ._ergm import (
    ErgmModel,
    sufficient_statistics,
    log_unnormalized_density,
    conditional_edge_prob,
    conditional_edge_probs,
    gibbs_sample,
    sample_chain,
    enumerate_distribution,
    EDGE,
    TWOSTAR,
)
from ._generators import (
    grg,
    barabasi_albert,
    SampleDirectory,
    sample_directory_generator,
    next_sample,
    GeneratorSpec,
    generate,
    generate_batch,
    TORUS,
    SQUARE,
)
