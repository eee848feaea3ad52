"""Hand-transcribed network action and amplitude-update tables.

Each entry is a pair of (coefficient kind, basis label); "sin" stands for
sin(phi) and "icos" for i*cos(phi).
"""
import numpy as np

# L_net |s> for each basis state s
TABLE1 = {
    "000": [("sin", "000"), ("icos", "111")],
    "001": [("icos", "010"), ("sin", "101")],
    "010": [("sin", "011"), ("icos", "100")],
    "011": [("icos", "001"), ("sin", "110")],
    "100": [("icos", "000"), ("sin", "111")],
    "101": [("sin", "010"), ("icos", "101")],
    "110": [("icos", "011"), ("sin", "100")],
    "111": [("sin", "001"), ("icos", "110")],
}

# psi(s, t) as a combination of psi(., t - 1)
TABLE2 = {
    "000": [("sin", "000"), ("icos", "100")],
    "001": [("icos", "011"), ("sin", "111")],
    "010": [("icos", "001"), ("sin", "101")],
    "011": [("sin", "010"), ("icos", "110")],
    "100": [("icos", "010"), ("sin", "110")],
    "101": [("sin", "001"), ("icos", "101")],
    "110": [("sin", "011"), ("icos", "111")],
    "111": [("icos", "000"), ("sin", "100")],
}


def _coef(kind, phi):
    return np.sin(phi) if kind == "sin" else 1j * np.cos(phi)


def table1_vector(label, phi):
    v = np.zeros(8, dtype=complex)
    for kind, target in TABLE1[label]:
        v[int(target, 2)] += _coef(kind, phi)
    return v


def table2_row(label, phi):
    row = np.zeros(8, dtype=complex)
    for kind, source in TABLE2[label]:
        row[int(source, 2)] += _coef(kind, phi)
    return row
