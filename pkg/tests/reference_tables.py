"""Published BGK slip coefficients for a fully diffuse wall (chi = 1)."""

EVEN_M = {  # M: (k0, t0, k2)
    4: (0.99247, 0.36988, -0.73976),
    6: (1.00360, 0.37617, -0.75233),
    8: (1.00772, 0.37848, -0.75697),
    10: (1.00984, 0.37967, -0.75934),
    12: (1.01112, 0.38039, -0.76077),
}

ODD_M = {  # M: (k1, t1, t2); t2 is not printed for M = 3
    3: (0.42763, 1.12868, None),
    5: (0.43922, 1.27183, -1.38715),
    7: (0.44019, 1.28673, -1.40694),
    9: (0.44040, 1.29213, -1.41403),
    11: (0.44046, 1.29488, -1.41760),
}

CONVERGED = {"k0": 1.01619, "t0": 0.38316, "k2": -0.76632,
             "k1": 0.44046, "t1": 1.30272, "t2": -1.42758}
