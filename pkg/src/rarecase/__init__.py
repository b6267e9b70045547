"""Certified certificate counting from unreliable oracles.

Verifier circuits are arithmetised over Z_p, an oracle for the generalised
counting polynomial is self-corrected along random lines, each answer is
certified by an oracle sumcheck, and certified residues are combined by
Chinese remaindering into the exact certificate count.
"""

__version__ = "0.1.0"

from .field import FieldElement, UniPoly, inv, interpolate, poly_eval, NonInvertible, ModulusMismatch, DuplicatePoint
from .circuit import (Circuit, Gate, GateKind, DegreeProfile, parse_circuit, eval_bool, arith_eval,
                      degree_profile, build_cnf_verifier, parse_dimacs)
from .certpoly import (Instance, CountResult, EnumerationTooLarge, count_certificates_bruteforce, g_prime_eval,
                       f_prime_eval, self_reduction_sides, estimate_zero_fraction)
from .primes import primes_in_interval, beta_for, paper_interval, max_gap, gap_report
from .oracles import (Oracle, NoisyOracleConfig, honest_oracle, noisy_oracle, shifted_oracle, majority_amplify)
from .decoder import DecoderParams, CandidateMachine, unique_decode, local_correct, candidate_machines
from .osp import OspConfig, ProtocolTranscript, Verdict, Reason, run_osp, certify
from .driver import (CertifiedResidue, InsufficientPrimes, PipelineConfig, crt_combine, reconstruct_count,
                     decide_membership)
