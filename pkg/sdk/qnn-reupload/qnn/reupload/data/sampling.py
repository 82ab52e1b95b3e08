# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InsufficientSamplesError, InvalidArgumentError
from qnn.reupload.management.logger_module import logger

from typing import Tuple

import numpy as np


def _class_split(n: int) -> Tuple[int, int]:
    # (positives, negatives); the odd row goes to the negatives
    return n // 2, n - n // 2


def balanced_sample(
        data: LabeledDataset,
        n_train: int = 400,
        n_test: int = 400,
        seed: int = 0
) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    Draws disjoint train and test sets with a 50-50 class split, without replacement.

    The provenance of each result records the seed and the source row indices.

    :param data: The labeled rows to sample from.
    :type data: LabeledDataset
    :param n_train: Size of the train set.
    :type n_train: int
    :param n_test: Size of the test set.
    :type n_test: int
    :param seed: Random seed.
    :type seed: int

    :return: (train, test).
    :rtype: Tuple[LabeledDataset, LabeledDataset]

    :raises InsufficientSamplesError: If a class has too few rows for both sets.
    """
    for name, value in (('n_train', n_train), ('n_test', n_test)):
        if isinstance(value, bool) or int(value) != value or value < 2:
            raise InvalidArgumentError(f"{name} must be an integer of at least 2, got {value}")
    train_pos, train_neg = _class_split(int(n_train))
    test_pos, test_neg = _class_split(int(n_test))

    positive_rows = np.flatnonzero(data.labels == 1)
    negative_rows = np.flatnonzero(data.labels == 0)
    if train_pos + test_pos > positive_rows.size:
        raise InsufficientSamplesError(1, train_pos + test_pos, int(positive_rows.size))
    if train_neg + test_neg > negative_rows.size:
        raise InsufficientSamplesError(0, train_neg + test_neg, int(negative_rows.size))

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    positive_rows = rng.permutation(positive_rows)
    negative_rows = rng.permutation(negative_rows)

    train_rows = np.concatenate([positive_rows[:train_pos], negative_rows[:train_neg]])
    test_rows = np.concatenate([positive_rows[train_pos:train_pos + test_pos],
                                negative_rows[train_neg:train_neg + test_neg]])
    train_rows = rng.permutation(train_rows)
    test_rows = rng.permutation(test_rows)

    def _take(rows: np.ndarray, role: str) -> LabeledDataset:
        subset = data.subset(rows, transform=f"balanced_sample({role}, n={rows.size}, seed={seed})")
        return subset.with_meta(seed=seed, split=role, source_rows=[int(i) for i in rows])

    train, test = _take(train_rows, 'train'), _take(test_rows, 'test')
    logger.info(f"Sampled {len(train)} train and {len(test)} test rows from {len(data)}, seed {seed}")
    return train, test
