CRITERIA_CONFIG = {
    "version": "1.0.0",
    "name": "RatSelection_DecisionCriteria",
    # Canonical column order of every decision matrix.
    "attributes": {
        "CB": {"label": "Cost per byte", "direction": "cost", "units": "currency/byte"},
        "S": {"label": "Security", "direction": "benefit", "units": "%"},
        "DR": {"label": "Data rate", "direction": "benefit", "units": "mbps"},
        "D": {"label": "Delay", "direction": "cost", "units": "ms"},
        "J": {"label": "Jitter", "direction": "cost", "units": "ms"},
        "PLR": {"label": "Packet loss ratio", "direction": "cost", "units": "%"},
    },
    # Published AHP rows, order (CB, S, DR, D, J, PLR). Rounded to three
    # decimals at the source, so rows sum to 0.996-0.998.
    "ahp_weights": {
        "conversational": (0.036, 0.124, 0.104, 0.325, 0.307, 0.102),
        "background": (0.085, 0.155, 0.441, 0.051, 0.079, 0.186),
        "interactive": (0.078, 0.174, 0.092, 0.309, 0.050, 0.294),
        "streaming": (0.101, 0.195, 0.297, 0.092, 0.119, 0.192),
    },
    "published_sum_tolerance": 5e-3,
    # Closed [lo, hi] ranges per RAT; lo == hi is a fixed value.
    "rat_profiles": {
        "WiFi": {
            "CB": (5.0, 10.0),
            "S": (50.0, 50.0),
            "DR": (1.0, 11.0),
            "D": (100.0, 150.0),
            "J": (10.0, 20.0),
            "PLR": (20.0, 80.0),
        },
        "WiMAX": {
            "CB": (40.0, 50.0),
            "S": (60.0, 60.0),
            "DR": (1.0, 60.0),
            "D": (60.0, 100.0),
            "J": (3.0, 10.0),
            "PLR": (20.0, 80.0),
        },
        "LTE": {
            "CB": (40.0, 50.0),
            "S": (60.0, 60.0),
            "DR": (2.0, 100.0),
            "D": (50.0, 300.0),
            "J": (3.0, 12.0),
            "PLR": (20.0, 80.0),
        },
        "FiveG": {
            "CB": (90.0, 90.0),
            "S": (70.0, 70.0),
            "DR": (400.0, 1000.0),
            "D": (1.0, 10.0),
            "J": (1.0, 3.0),
            "PLR": (5.0, 20.0),
        },
    },
    "bwm": {
        "scale": (1, 9),
        "important_count": 3,
        # Consistency index by a_BW (best-over-worst judgement).
        "consistency_index": {
            1: 0.00,
            2: 0.44,
            3: 1.00,
            4: 1.63,
            5: 2.30,
            6: 3.00,
            7: 3.73,
            8: 4.47,
            9: 5.23,
        },
    },
}


def consistency_index(a_bw: int) -> float:
    """Look up the BWM consistency index for a best-over-worst judgement"""
    table = CRITERIA_CONFIG["bwm"]["consistency_index"]
    if a_bw not in table:
        raise KeyError(f"No consistency index for a_BW={a_bw}")
    return table[a_bw]
