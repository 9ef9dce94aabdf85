from ._nlfi import (
    CertificateRequiredError,
    CertificationError,
    ConvergenceError,
    DocumentError,
    ParameterError,
    Problem,
    ValidationError,
    builtin_names,
    sigma_table,
)

__all__ = [
    "CertificateRequiredError",
    "CertificationError",
    "ConvergenceError",
    "DocumentError",
    "ParameterError",
    "Problem",
    "ValidationError",
    "builtin_names",
    "sigma_table",
]
