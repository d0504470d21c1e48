"""Numerical laboratory for single-point blow-up of u_t = u_xx + |u|^{p-1} u."""

from ._core import *  # noqa: F401,F403
