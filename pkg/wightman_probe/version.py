# -*- coding: utf-8 -*-
"""Wightman Probe Meta information.
   Wightman Probe simulates Unruh-DeWitt detectors under combs of fast switching
   pulses and reconstructs two-point functions from excitation probabilities.
"""

__title__ = "wightman_probe"
__description__ = (
    "Unruh-DeWitt detector simulator that reconstructs Wightman functions "
    "from delta-comb excitation probabilities."
)
__version__ = "0.3.2"  # pragma: no cover
__author__ = "Jesus Lara"
__author_email__ = "jesuslarag@gmail.com"
__license__ = "Apache 2.0 License"


def get_version() -> tuple:  # pragma: no cover
    """
    Get wightman-probe version as tuple.
    """
    return tuple(x for x in __version__.split("."))  # pragma: no cover
