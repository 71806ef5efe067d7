"""Curl and flux of free-group endomorphisms.

Exact counting of how many elements of the radius-n ball an endomorphism
keeps inside the ball (curl) versus pushes out (flux): by brute-force
enumeration at small radius, by a cancellation-bounded transducer with
big-integer dynamic programming at large radius, and by Monte Carlo
sampling beyond both.  Includes growth tables, rate/root reporting, a
classifier for conjugation-and-permutation maps, and executable property
suites.
"""

from curlflux._kernels import BACKEND
from curlflux.exact_count import (
    CurlFluxPoint,
    GrowthPoint,
    JointLengthTable,
    curl_flux_brute,
    growth_function,
    joint_length_histogram,
)
from curlflux.metrics import (
    PropertyReport,
    RateEstimate,
    big_root,
    curl_flux_series,
    curl_roots,
    flux_roots,
    growth_rate_points,
)
from curlflux.morphisms import (
    Classification,
    Endomorphism,
    VerifiedAutomorphism,
    classify,
    compose,
    identity,
    inner,
    is_simple,
    parse_map_file,
    permutation,
    power,
    power_map,
    verify_inverse,
)
from curlflux.sampler import RatioEstimate, estimate_curl_ratio, sample_uniform_ball
from curlflux.transducer import Transducer, build, count_joint, curl_flux_dp
from curlflux.words import (
    GroupContext,
    Word,
    ball_size,
    concat,
    enumerate_ball,
    enumerate_sphere,
    format_word,
    inverse,
    parse_word,
    reduce,
    sphere_size,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Classification",
    "CurlFluxPoint",
    "Endomorphism",
    "GroupContext",
    "GrowthPoint",
    "JointLengthTable",
    "PropertyReport",
    "RateEstimate",
    "RatioEstimate",
    "Transducer",
    "VerifiedAutomorphism",
    "Word",
    "ball_size",
    "big_root",
    "build",
    "classify",
    "compose",
    "concat",
    "count_joint",
    "curl_flux_brute",
    "curl_flux_dp",
    "curl_flux_series",
    "curl_roots",
    "enumerate_ball",
    "enumerate_sphere",
    "estimate_curl_ratio",
    "flux_roots",
    "format_word",
    "growth_function",
    "growth_rate_points",
    "identity",
    "inner",
    "inverse",
    "is_simple",
    "joint_length_histogram",
    "parse_map_file",
    "parse_word",
    "permutation",
    "power",
    "power_map",
    "reduce",
    "sample_uniform_ball",
    "sphere_size",
    "verify_inverse",
]
