"""Observation-time certification and modal reconstruction for vibrating systems.

The package answers two questions about a string, beam, or rectangular
plate observed through full position snapshots at a handful of times:

* is a given pair (or tuple) of observation times *strategic*, i.e. does
  it control all initial data with a quantified constant, and can that
  be certified rather than merely sampled;
* given the snapshots, recover the initial position and velocity and
  quantify how observation noise amplifies in the process.

Certification reduces to nearest-integer distance floors for the gap
divided by pi, computed in exact arithmetic wherever the gap is exact.
"""

__version__ = "0.1.0"

from .cf import (ContinuedFraction, Convergent, available_quotients, cf_expand,
                 cf_value, convergents, partial_quotient_sup)
from .constructions import (GapSearchResult, RationalGapCertificate,
                            SearchExhausted, cf_shift_sequence,
                            construct_rational_gap, loaded_gap_search)
from .diophantine import (FloorScan, NuEstimate, badly_approx_floor,
                          dirichlet_witnesses, floor_scan_rows,
                          linear_form_floor, nearest_int_distance,
                          nu_liminf_estimate, theoretical_floor_from_K)
from .exact import ExactReal, ExactRealParseError, parse_exact
from .observability import (CERTIFIED_ALL_K, CERTIFIED_UP_TO_SCAN,
                            INCONCLUSIVE_FLOAT, REFUTED, LoadedThreshold,
                            ModeMap, ObservationGap, SingularModeError,
                            SobolevOrderPair, StrategicCertificate,
                            certify_beam, certify_loaded, certify_plate,
                            certify_string, closed_form_inverse_norm,
                            exact_resonant_modes, loaded_q_threshold, mode_map,
                            mode_map_det, mode_map_inverse_norm,
                            multi_time_floor, perturbation_gap, plate_thetas)
from .reconstruction import (ModeRecord, NoiseStats, ReconstructionReport,
                             SensitivityProfile, SnapshotSet, mixed_reconstruct,
                             noise_experiment, reconstruct, sensitivity_profile,
                             write_report_csv)
from .spectral import (CoefficientVector, ModalState, WaveSystem, evolve,
                       frequency, from_modal, modal_energy, random_state,
                       read_snapshot, sample_grid, sobolev_norm, to_modal,
                       write_snapshot)
