"""Reference values transcribed by hand for regression and acceptance tests."""

import cmath
import math

# Limit covariance first rows, written "(numerators)/denominator".
RRT_ROWS = {
    2: "(1,-1)/12",
    3: "(2,-1,-1)/18",
    4: "(7,-1,-5,-1)/48",
    5: "(6,1,-4,-4,1)/25",
    6: "(2,1,-1,-2,-1,1)/36",
}

BST_ROWS = {
    2: "(1,-1)/28",
    3: "(2,-1,-1)/45",
    4: "(17,-3,-11,-3)/336",
    5: "(16,1,-9,-9,1)/275",
    6: "(89,23,-37,-61,-37,23)/1260",
    7: "(62,27,-15,-43,-43,-15,27)/637",
    8: "(269,165,-11,-171,-235,-171,-11,165)/1344",
}

BST_EXTERNAL_ROWS = {
    2: "(9,-9)/28",
    3: "(14,-7,-7)/45",
    4: "(97,-27,-43,-27)/336",
    5: "(76,-9,-29,-29,-9)/275",
    6: "(353,11,-109,-157,-109,11)/1260",
    7: "(202,41,-43,-99,-99,-43,41)/637",
    8: "(685,309,-43,-363,-491,-363,-43,309)/1344",
}

# CGWT rows per unit offspring variance
CGWT_ROWS = {
    2: "(1,-1)/16",
    3: "(2,-1,-1)/27",
    4: "(5,-1,-3,-1)/64",
    5: "(2,0,-1,-1,0)/25",
    6: "(35,5,-13,-19,-13,5)/432",
}


def parse_row(text):
    """``"(a,b,...)/d"`` -> list of Fractions."""
    from fractions import Fraction

    nums, den = text.rsplit("/", 1)
    return [Fraction(int(v), int(den)) for v in nums.strip("()").split(",")]


def rrt_closed_forms(m, gamma):
    """Closed-form moments of Z and Zhat for RRT in the large regime."""
    w = cmath.exp(2j * math.pi / m)
    a = math.cos(2 * math.pi / m)
    ez2 = 2 / (2 - w)
    ezz = 2 * a / (2 * a - 1)
    ez3 = 6 * (1 + w) / ((3 - w**2) * (2 - w))
    return {
        "EZ": 1.0,
        "EZ2": ez2,
        "E|Z|2": ezz,
        "EZ3": ez3,
        "EZhat": 2 / (m * gamma(1 + w)),
        "EZhat2": 8 / (m**2 * (2 - w) * gamma(1 + 2 * w)),
        "E|Zhat|2": 8 * a / (m**2 * (2 * a - 1) * gamma(1 + 2 * a)),
        "EZhat3": 48 * (1 + w) / (m**3 * (3 - w**2) * (2 - w) * gamma(1 + 3 * w)),
    }


def bst_ez3_printed(m):
    """Third moment of the BST limit exactly as printed in the source; its
    second denominator factor disagrees with the one in E Z^2."""
    w = cmath.exp(2j * math.pi / m)
    return 6 * w**5 / ((3 * w - 1 - w**3) * (4 * w - 1 - w**2))


def bst_closed_forms(m, gamma):
    """Closed-form moments for BST in the large regime, with the third moment
    denominator ``4w - 1 - 2w^2`` (the factor that also appears in E Z^2)."""
    w = cmath.exp(2j * math.pi / m)
    a = math.cos(2 * math.pi / m)
    ez2 = 2 * w**2 / (4 * w - 1 - 2 * w**2)
    ezz = 2 / (4 * a - 3)
    ez3 = 6 * w**5 / ((3 * w - 1 - w**3) * (4 * w - 1 - 2 * w**2))
    return {
        "EZ": 1.0,
        "EZ2": ez2,
        "E|Z|2": ezz,
        "EZ3": ez3,
        "EZhat": 2 / (m * (2 * w - 1) * gamma(2 * w)),
        "EZhat2": 4 / (m**2 * (2 * w - 1) ** 2 * gamma(4 * w - 1)) * ez2,
        "E|Zhat|2": 4 / (m**2 * (5 - 4 * a) * gamma(4 * a - 1)) * ezz,
        "EZhat3": 8 / (m**3 * (2 * w - 1) ** 3 * gamma(6 * w - 2)) * ez3,
    }


MOMENT_KEYS = {
    "EZ": (1, 0),
    "EZ2": (2, 0),
    "E|Z|2": (1, 1),
    "EZ3": (3, 0),
}
