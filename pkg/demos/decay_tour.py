"""Walk through a few decay experiments and compare fitted slopes with predictions.

Run with ``python demos/decay_tour.py``; it takes about a minute.
"""

import numpy as np

from dispersive.decay import fit_slope, predict, run_decay_experiment
from dispersive.littlewood_paley import parse_band
from dispersive.phases import make_model

CASES = [
    # (label, model, band, s, n, t grid)
    ("Airy-type y^3, low-pass band", make_model("power", alpha=1.0), "halfline_low:1", 0.0, 1,
     np.geomspace(10, 1e3, 12)),
    ("Schrodinger y^2, one dyadic block", make_model("power", alpha=0.0), "dyadic:0", 0.0, 1,
     np.geomspace(1e2, 1e4, 8)),
    ("water waves, low frequencies", make_model("water_wave"), "halfline_low:1", 0.0, 1,
     np.geomspace(1e2, 1e4, 10)),
    ("Schrodinger y^2 in the plane", make_model("power", alpha=0.0), "halfline_low:2", 0.0, 2,
     np.geomspace(10, 1e3, 8)),
]


def main():
    print(f"{'case':40s} {'estimate':>14s} {'sigma':>7s} {'slope':>8s}")
    for label, model, spec, s, n, ts in CASES:
        band = parse_band(spec)
        pred = predict(model, band, s=s, n=n)
        fit = fit_slope(run_decay_experiment(model, band, s=s, n=n, t_grid=ts))
        print(f"{label:40s} {pred.lemma:>14s} {pred.sigma:7.4f} {fit.slope:8.4f}")


if __name__ == "__main__":
    main()
