"""Signal processing on hypergraphs through an orthogonal tensor decomposition."""

from .apps import (ClassifierModel, ClusterResult, CompressedSignal, DenoiseResult, compress,
                   decompress, denoise_pipeline, lp_hgsp_classify, lp_hgsp_train,
                   spectral_cluster, spectral_embedding)
from .errors import ConvergenceError, NumericalError
from .filters import (PolySpec, apply_matrix_poly, apply_tensor_poly, denoise, poly_response,
                      shift_k)
from .hypergraph import (Hypergraph, adjacency_tensor, build_knn_hypergraph, degree_vector,
                         edge_weight, edge_weight_exact, laplacian_tensor)
from .sampling import (SamplingPlan, build_plan, interpolate, interpolate_tensor, sample,
                       sample_tensor, sampled_hypergraph, sampled_shift)
from .spectrum import (Spectrum, bandwidth, complete_basis, decompose, freq_to_original,
                       frequency_boundary, hgft, ihgft, original_to_freq, supporting_matrix,
                       total_variation_component, total_variation_signal)
from .symtensor import (SymTensor, contract_matrix, contract_vector, hadamard_power,
                        n_mode_product, outer_power)

__version__ = "0.1.0"
