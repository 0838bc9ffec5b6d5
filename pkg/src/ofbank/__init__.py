"""Oversampled FIR filter banks: minimal synthesis lengths for perfect
reconstruction, per-phase system matrices, rank certificates, synthesis
design, and Monte-Carlo experiments."""

from .errors import DomainError, InfeasibleConfigError, SolverFailure
from .fb_core import (FilterBank, PolyphaseComponent, delay_range, interleave,
                      loads_bank, dumps_bank, polyphase_decompose,
                      polyphase_lengths, read_bank, write_bank)
from .polyphase_matrix import (ConvMatrix, PolyphaseMatrix, TargetVector,
                               build_Hp, conv_matrix, kappa, stacked_conv,
                               target_vector, write_matrix_csv)
from .lengths import (GapCertificate, LengthReport, counting_length, gaps,
                      length_bounds, length_report, necessary_length,
                      sufficient_length)
from .constructions import (CertificateBank, CertificateReport,
                            algorithm1_bank, algorithm2_bank, exact_rank,
                            load_certificate, save_certificate,
                            verify_certificate)
from .feasibility import (DistortionReport, FeasibilityResult, SynthesisBank,
                          design_synthesis, distortion, polyphase_predict,
                          pr_feasible, pr_feasible_any_delay, simulate)
from .experiments import (ExperimentGrid, run_distortion_boxplot,
                          run_distortion_sweep, run_feasibility_mc,
                          run_length_curves, substream)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "InfeasibleConfigError", "SolverFailure",
    "FilterBank", "PolyphaseComponent", "polyphase_decompose",
    "polyphase_lengths", "interleave", "delay_range",
    "read_bank", "write_bank", "loads_bank", "dumps_bank",
    "ConvMatrix", "PolyphaseMatrix", "TargetVector",
    "conv_matrix", "stacked_conv", "build_Hp", "kappa", "target_vector",
    "write_matrix_csv",
    "LengthReport", "GapCertificate", "sufficient_length",
    "necessary_length", "counting_length", "length_bounds", "gaps",
    "length_report",
    "CertificateBank", "CertificateReport", "algorithm1_bank",
    "algorithm2_bank", "verify_certificate", "exact_rank",
    "save_certificate", "load_certificate",
    "FeasibilityResult", "SynthesisBank", "DistortionReport",
    "pr_feasible", "pr_feasible_any_delay", "design_synthesis",
    "simulate", "polyphase_predict", "distortion",
    "ExperimentGrid", "run_length_curves", "run_feasibility_mc",
    "run_distortion_sweep", "run_distortion_boxplot", "substream",
]
