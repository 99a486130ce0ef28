# The convergence protocol: sample, build, persist, compare with a
# reference diagram and fit log(mean d_b) against log(log n / n).
#
# Run: python demos/04_convergence_experiment.py   (a few seconds)

# %% imports
import math
from pathlib import Path

from topostat import Builder, ExperimentConfig, SpaceSpec, convergence_experiment, plot_svg
from topostat.io import format_results

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# %% density vanishing linearly at the boundary of [-1, 1]: rate n^(-1/2)
cfg = ExperimentConfig(
    space=SpaceSpec("ball_boundary_density", d=1, alpha=1.0),
    n_grid=(100, 200, 400, 800),
    k=10,
    seed=7,
    builder=Builder("rips", math.inf, 1),
    homology_dim=0,
    reference="exact",
)
res = convergence_experiment(cfg)
print(format_results(res))

# %% Lissajous curve, alpha complex, dense reference of 8000 points
cfg = ExperimentConfig(SpaceSpec("lissajous"), (100, 200, 400), 5, 7, Builder("alpha2d"), 1, dense_n=8000)
res = convergence_experiment(cfg)
print(format_results(res))
plot_svg(res, out / "lissajous.svg")
print("wrote", out / "lissajous.svg")
