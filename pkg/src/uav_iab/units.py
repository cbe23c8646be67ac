"""Decibel and power-unit conversions used throughout the package."""

import numpy as np

SPEED_OF_LIGHT = 2.998e8  # m/s


def _out(a):
    return float(a) if a.ndim == 0 else a


def db_to_linear(x_db):
    return _out(np.power(10.0, np.asarray(x_db, dtype=float) / 10.0))


def linear_to_db(x):
    """``10*log10(x)``; zero maps to ``-inf``."""
    with np.errstate(divide="ignore"):
        return _out(10.0 * np.log10(np.asarray(x, dtype=float)))


def dbm_to_watt(p_dbm):
    return db_to_linear(np.asarray(p_dbm, dtype=float) - 30.0)


def watt_to_dbm(p_w):
    return _out(np.asarray(linear_to_db(p_w)) + 30.0)
