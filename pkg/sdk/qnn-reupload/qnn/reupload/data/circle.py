# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.management.logger_module import logger

import numpy as np


DEFAULT_RADIUS = 1.0
_BATCH = 256


def inside_circle(features, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """
    Labels points 1 when strictly inside the circle of the given radius around the origin.

    :param features: Points of shape (M, 2).
    :type features: array-like
    :param radius: Circle radius.
    :type radius: float

    :return: Labels of shape (M,).
    :rtype: numpy.ndarray
    """
    features = np.asarray(features, dtype=np.float64)
    return (np.sum(features ** 2, axis=1) < radius ** 2).astype(np.int64)


def gen_circle(n: int, seed: int, radius: float = DEFAULT_RADIUS, balanced: bool = True) -> LabeledDataset:
    """
    Draws points uniformly on [-1, 1]^2 and labels them by the inside-circle test.

    With balanced=True draws are kept per class until ceil(n/2) inside points and
    floor(n/2) outside points are collected, then shuffled.

    :param n: Number of points, at least 2.
    :type n: int
    :param seed: Random seed.
    :type seed: int
    :param radius: Circle radius; must leave both classes non-empty in the square.
    :type radius: float
    :param balanced: Rejection-sample to an exact 50-50 split.
    :type balanced: bool

    :return: The dataset.
    :rtype: LabeledDataset
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise InvalidArgumentError(f"n must be an integer of at least 2, got {n}")
    if not (0.0 < radius < np.sqrt(2.0)):
        raise InvalidArgumentError(f"radius must lie in (0, sqrt(2)), got {radius}")
    n = int(n)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    meta = {
        'source': 'circle',
        'seed': seed,
        'radius': float(radius),
        'balanced': bool(balanced),
        'transforms': [],
    }

    if not balanced:
        features = rng.uniform(-1.0, 1.0, size=(n, 2))
        return LabeledDataset(features, inside_circle(features, radius), meta)

    wanted = {1: n - n // 2, 0: n // 2}
    kept = {0: [], 1: []}
    draws = 0
    while len(kept[0]) < wanted[0] or len(kept[1]) < wanted[1]:
        batch = rng.uniform(-1.0, 1.0, size=(_BATCH, 2))
        draws += _BATCH
        for point, label in zip(batch, inside_circle(batch, radius)):
            label = int(label)
            if len(kept[label]) < wanted[label]:
                kept[label].append(point)

    features = np.vstack(kept[1] + kept[0])
    labels = np.array([1] * wanted[1] + [0] * wanted[0], dtype=np.int64)
    order = rng.permutation(n)
    logger.info(f"Generated {n} circle points ({wanted[1]} inside, {wanted[0]} outside) from {draws} draws, seed {seed}")
    return LabeledDataset(features[order], labels[order], meta)
