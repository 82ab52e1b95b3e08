# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.exceptions import InvalidArgumentError, UndefinedMetricError

from typing import Any, Dict

import numpy as np


class ConfusionMatrix:
    """
    Counts of a binary classifier's outcomes with class 1 as the positive class.

    :param tp: True positives.
    :type tp: int
    :param tn: True negatives.
    :type tn: int
    :param fp: False positives.
    :type fp: int
    :param fn: False negatives.
    :type fn: int
    """
    __slots__ = ("_tp", "_tn", "_fp", "_fn")

    def __init__(self, tp: int, tn: int, fp: int, fn: int) -> None:
        for name, value in (('tp', tp), ('tn', tn), ('fp', fp), ('fn', fn)):
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise InvalidArgumentError(f"{name} must be a non-negative integer, got {value}")
        self._tp = int(tp)
        self._tn = int(tn)
        self._fp = int(fp)
        self._fn = int(fn)

    @property
    def tp(self) -> int:
        return self._tp

    @property
    def tn(self) -> int:
        return self._tn

    @property
    def fp(self) -> int:
        return self._fp

    @property
    def fn(self) -> int:
        return self._fn

    @property
    def total(self) -> int:
        return self._tp + self._tn + self._fp + self._fn

    def swapped(self) -> 'ConfusionMatrix':
        """
        The same outcomes counted with class 0 as the positive class.

        :return: The dual confusion matrix.
        :rtype: ConfusionMatrix
        """
        return ConfusionMatrix(tp=self._tn, tn=self._tp, fp=self._fn, fn=self._fp)

    def to_dict(self) -> Dict[str, int]:
        return {'tp': self._tp, 'tn': self._tn, 'fp': self._fp, 'fn': self._fn}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ConfusionMatrix':
        return cls(data['tp'], data['tn'], data['fp'], data['fn'])

    def __eq__(self, other) -> bool:
        if isinstance(other, ConfusionMatrix):
            return self.to_dict() == other.to_dict()
        return False

    def __hash__(self) -> int:
        return hash((self._tp, self._tn, self._fp, self._fn))

    def __repr__(self) -> str:
        return f"ConfusionMatrix(tp={self._tp}, tn={self._tn}, fp={self._fp}, fn={self._fn})"


def confusion(predictions, labels) -> ConfusionMatrix:
    """
    Counts predictions against labels.

    :param predictions: Predicted labels, each 0 or 1.
    :type predictions: array-like
    :param labels: True labels, each 0 or 1.
    :type labels: array-like

    :return: The confusion matrix.
    :rtype: ConfusionMatrix
    """
    predictions = np.asarray(predictions).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if predictions.shape != labels.shape:
        raise InvalidArgumentError(f"Got {predictions.size} predictions for {labels.size} labels")
    for name, values in (('predictions', predictions), ('labels', labels)):
        if values.size and not np.all(np.isin(values, (0, 1))):
            raise InvalidArgumentError(f"{name} must be 0 or 1")
    predicted = predictions == 1
    actual = labels == 1
    return ConfusionMatrix(
        tp=int(np.sum(predicted & actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fp=int(np.sum(predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
    )


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise UndefinedMetricError("accuracy is undefined for an empty confusion matrix")
    return (cm.tp + cm.tn) / cm.total


def precision(cm: ConfusionMatrix) -> float:
    if cm.tp + cm.fp == 0:
        raise UndefinedMetricError("precision is undefined with no positive predictions (tp + fp = 0)")
    return cm.tp / (cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> float:
    if cm.tp + cm.fn == 0:
        raise UndefinedMetricError("recall is undefined with no positive labels (tp + fn = 0)")
    return cm.tp / (cm.tp + cm.fn)


def metrics_summary(cm: ConfusionMatrix) -> Dict[str, Any]:
    """
    Counts plus every defined metric; undefined metrics are left out.

    :param cm: The confusion matrix.
    :type cm: ConfusionMatrix

    :return: A mapping with tp, tn, fp, fn and the defined metrics among accuracy, precision, recall.
    :rtype: Dict[str, Any]
    """
    summary: Dict[str, Any] = cm.to_dict()
    for name, metric in (('accuracy', accuracy), ('precision', precision), ('recall', recall)):
        try:
            summary[name] = metric(cm)
        except UndefinedMetricError:
            pass
    return summary
