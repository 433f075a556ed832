"""Kernel dispatch: numba-compiled fast path with a plain-Python fallback.

The plain module ``_kernels_impl`` is the single source.  When numba is
available and ANYTIME_COMPARE_NO_NUMBA is unset (or 0/false), a second,
independent copy of that module is loaded and its functions are wrapped
with ``numba.njit`` leaves-first, so kernel-to-kernel calls stay inside
compiled code.  Either way both namespaces remain importable, which is
what the equivalence tests and the benchmark rely on:

    from anytime_compare.kernels import pure, compiled, active, USING_NUMBA
"""

import importlib.util
import os

from . import _kernels_impl as pure

# leaves before callers, so globals resolve to compiled functions
_WRAP_ORDER = [
    "_log1pmx",
    "_log_prefactor",
    "_log_gammainc_upper_quad",
    "log_gammainc_lower",
    "gamma_exp_log_m",
    "gamma_exp_log_m_path",
    "gamma_exp_max_log_m",
    "gamma_exp_two_sided_crossed",
    "_poly_eval",
    "_root_scan_poly",
    "k29_poly_path",
    "_rbf_f",
    "_root_scan_rbf",
    "k29_rbf_path",
]

ENV_FLAG = "ANYTIME_COMPARE_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false")


def _load_compiled():
    from numba import njit

    spec = importlib.util.find_spec("anytime_compare._kernels_impl")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    for name in _WRAP_ORDER:
        setattr(mod, name, njit(cache=True, nogil=True)(getattr(mod, name)))
    return mod


compiled = None
if not _numba_disabled():
    try:
        compiled = _load_compiled()
    except ImportError:
        compiled = None

active = compiled if compiled is not None else pure
USING_NUMBA = compiled is not None

log_gammainc_lower = active.log_gammainc_lower
gamma_exp_log_m = active.gamma_exp_log_m
gamma_exp_log_m_path = active.gamma_exp_log_m_path
gamma_exp_max_log_m = active.gamma_exp_max_log_m
gamma_exp_two_sided_crossed = active.gamma_exp_two_sided_crossed
k29_poly_path = active.k29_poly_path
k29_rbf_path = active.k29_rbf_path
root_scan_poly = active._root_scan_poly
root_scan_rbf = active._root_scan_rbf
