"""Reference numbers the reproduction is compared against, given to two
decimals."""

FIVE_FAMILY_GAMMA = 0.4

FIVE_FAMILY_HITTING = {
    # k = 1..6
    "const": (1.37, 4.94, 9.36, 17.48, 33.35, 65.08),
    "exp-const": (0.79, 3.14, 6.19, 11.94, 23.45, 47.34),
    "const-exp": (0.62, 2.22, 4.27, 8.12, 15.84, 31.88),
    "power-const": (0.78, 2.95, 5.66, 10.61, 20.19, 39.49),
    "log-log": (0.72, 2.69, 5.22, 9.97, 19.49, 39.30),
}

FIVE_FAMILY_TAU = {
    "const": 3.46, "exp-const": 2.79, "const-exp": 2.00,
    "power-const": 1.61, "log-log": 3.11,
}

FIVE_FAMILY_KC = {
    "const": 2, "exp-const": 2, "const-exp": 2, "power-const": 1, "log-log": 2,
}

AGING_HITTING = {1: 86.94, 2: 95.49, 3: 97.14, 4: 97.62, 5: 97.80, 6: 97.89, 7: 97.93}

AGING_TAU = {0.2: 81.79, 0.3: 91.19, 0.4: 95.05, 0.5: 96.69, 0.6: 97.40}

AGING_KC = {0.2: 1, 0.3: 1, 0.4: 2, 0.5: 3}
