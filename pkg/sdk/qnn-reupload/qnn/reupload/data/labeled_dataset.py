# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.exceptions import InvalidArgumentError

import copy
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np


class LabeledDataset:
    """
    A set of feature rows with binary class labels and a provenance record.

    :param features: Feature matrix of shape (M, d).
    :type features: array-like
    :param labels: Labels of shape (M,), each 0 or 1.
    :type labels: array-like
    :param meta: Provenance record. Keys 'source', 'seed' and 'transforms' are always present.
    :type meta: Optional[Dict[str, Any]]
    """
    __slots__ = ("_features", "_labels", "_meta")

    def __init__(self, features, labels, meta: Optional[Dict[str, Any]] = None) -> None:
        features = np.array(features, dtype=np.float64)
        labels_in = np.asarray(labels)
        if features.ndim != 2:
            raise InvalidArgumentError(f"Features must be a 2-D matrix, got shape {features.shape}")
        if labels_in.ndim != 1 or labels_in.shape[0] != features.shape[0]:
            raise InvalidArgumentError(
                f"Labels must be a vector of length {features.shape[0]}, got shape {labels_in.shape}"
            )
        if not np.all(np.isfinite(features)):
            raise InvalidArgumentError("Features contain non-finite values")
        if labels_in.size and not np.all(np.isin(labels_in, (0, 1))):
            raise InvalidArgumentError("Labels must be 0 or 1")
        labels_out = labels_in.astype(np.int64)
        features.setflags(write=False)
        labels_out.setflags(write=False)

        record = copy.deepcopy(meta) if meta else {}
        record.setdefault('source', 'unknown')
        record.setdefault('seed', None)
        record['transforms'] = list(record.get('transforms', []))

        self._features = features
        self._labels = labels_out
        self._meta = record

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def meta(self) -> Dict[str, Any]:
        """
        A copy of the provenance record.

        :return: The provenance record.
        :rtype: Dict[str, Any]
        """
        return copy.deepcopy(self._meta)

    @property
    def dim(self) -> int:
        return int(self._features.shape[1])

    def __len__(self) -> int:
        return int(self._labels.shape[0])

    def class_counts(self) -> Tuple[int, int]:
        """
        Counts rows per class.

        :return: (number of label-0 rows, number of label-1 rows).
        :rtype: Tuple[int, int]
        """
        positives = int(np.sum(self._labels))
        return len(self) - positives, positives

    def subset(self, indices: Sequence[int], transform: Optional[str] = None) -> 'LabeledDataset':
        """
        Creates a dataset from the selected rows, appending a transform note to the provenance.

        :param indices: Row indices to keep, in order.
        :type indices: Sequence[int]
        :param transform: Optional transform description.
        :type transform: Optional[str]

        :return: The new dataset.
        :rtype: LabeledDataset
        """
        indices = np.asarray(indices, dtype=np.int64)
        meta = self.meta
        if transform:
            meta['transforms'].append(transform)
        return LabeledDataset(self._features[indices], self._labels[indices], meta)

    def with_meta(self, **updates: Any) -> 'LabeledDataset':
        meta = self.meta
        meta.update(updates)
        return LabeledDataset(self._features, self._labels, meta)

    def __eq__(self, other) -> bool:
        if isinstance(other, LabeledDataset):
            return (np.array_equal(self._features, other._features)
                    and np.array_equal(self._labels, other._labels)
                    and self._meta == other._meta)
        return False

    __hash__ = None

    def __repr__(self) -> str:
        n0, n1 = self.class_counts()
        return f"LabeledDataset(rows={len(self)}, dim={self.dim}, class0={n0}, class1={n1}, source={self._meta['source']!r})"
