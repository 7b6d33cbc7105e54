"""Learn a Gaussian halfspace with degree-1 L1 regression and watch the error fall with sample size."""

import numpy as np

from momentlearn.distributions import StandardGaussian, rng_for, sample
from momentlearn.learner import agnostic_learn, evaluate

n = 4
w = rng_for(0, 5).standard_normal(n)
w /= np.linalg.norm(w)

test = sample(StandardGaussian(n), seed=1, count=20000)
y_test = np.where(test @ w >= 0, 1.0, -1.0)

for size in (100, 400, 1600, 6400):
    X = sample(StandardGaussian(n), seed=size, count=size)
    y = np.where(X @ w >= 0, 1.0, -1.0)
    h = agnostic_learn(X, y, degree=1)
    print(f"train {size:5d}  test error {evaluate(h, test, y_test):.4f}")
