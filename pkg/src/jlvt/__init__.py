"""Fast polynomial surrogate for the threshold voltage of junctionless double-gate MOSFETs."""
from .dataset import Dataset, read_csv, write_csv
from .device_oracle import (BarrierSpec, DeviceInputs, OracleParams, StandInBarrier,
                            threshold_voltage, vt0, vti)
from .errors import (ConfigError, ConvergenceError, DataError, DomainError, JlvtError,
                     MeasurementError, NumericalError, SingularityError)
from .metrics import dvt_stats, evaluate, nmse_percent, speedup_ratio
from .ols_solver import (back_substitute, fit, gram_schmidt_decompose, normal_equation_solve,
                         project_output)
from .regressors import InputScaler, MonomialBasis, build_regressor_matrix, eval_expansion, monomial_basis
from .signalgen import ParameterRanges, WaveformConfig, label_with_oracle, random_training_set, test_sequence
from .surrogate import SurrogateModel

__version__ = "0.1.0"
