"""Largest integers not representable as sums of distinct polynomial values, with proofs."""

__version__ = "0.1.0"

from .certify import (
    CutoffWitness,
    Limits,
    ProofCertificate,
    base_case_check,
    check_certificate,
    cutoff,
    explore,
    prove_lambda,
    render_proof,
    verify_certificate,
)
from .complete import CompletenessReport, is_complete, value_gcd
from .counts import CountTable, count_table, largest_deficient
from .errors import (
    BudgetExceeded,
    LambdaError,
    LimitExceeded,
    NonIntegerValue,
    NotComplete,
    NotEventuallyPositive,
    TableTooShort,
    UnverifiedCertificate,
)
from .oracle import OracleLimit, lambda_bruteforce, rep_count_exact
from .parse import ParseError, ParseErrorKind, parse_poly, render_poly
from .poly import Polynomial, positivity_cutoff
