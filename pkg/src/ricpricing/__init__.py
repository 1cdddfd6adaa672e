"""Reserve pricing from a squared-loss bid predictor."""
from .core import (CellReport, Dataset, EmpiricalStats, PiecewiseReserve, RevenueReport, Sample,
                   ValidationError, empirical_stats, evaluate_prices, evaluate_reserve)
from .partition import (PartitionResult, SegmentCostTable, brute_force_partition,
                        optimal_k_partition, optimal_partitions, segment_cost)
from .pricing import (DEFAULT_QUANTIZATION, OffsetReserve, QuantizationConfig,
                      empirical_optimal_reserve, offset_reserve_fit, quantize, ric_h,
                      theoretical_offset)
from .regression import LossReport, Predictor, fit_linear_least_squares, squared_loss

__version__ = "0.1.0"
