# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import CsvParseError, DatasetFormatError
from qnn.reupload.management.logger_module import logger

import csv
import math
import os
from typing import Iterator, List, Tuple

import numpy as np


FEATURE_COLUMNS: Tuple[str, ...] = ('Time',) + tuple(f'V{i}' for i in range(1, 29)) + ('Amount',)
LABEL_COLUMN = 'Class'
HEADER: Tuple[str, ...] = FEATURE_COLUMNS + (LABEL_COLUMN,)


class FraudRow:
    """
    One card transaction.

    :param time: Seconds elapsed since the first transaction.
    :type time: float
    :param components: The 28 anonymized components V1..V28.
    :type components: Tuple[float, ...]
    :param amount: Transaction amount.
    :type amount: float
    :param label: 1 for fraud, 0 otherwise.
    :type label: int
    """
    __slots__ = ("_time", "_components", "_amount", "_label")

    def __init__(self, time: float, components, amount: float, label: int) -> None:
        components = tuple(float(v) for v in components)
        if len(components) != 28:
            raise DatasetFormatError(f"Expected 28 components, got {len(components)}")
        if label not in (0, 1):
            raise DatasetFormatError(f"Class must be 0 or 1, got {label}")
        self._time = float(time)
        self._components = components
        self._amount = float(amount)
        self._label = int(label)

    @property
    def time(self) -> float:
        return self._time

    @property
    def components(self) -> Tuple[float, ...]:
        return self._components

    @property
    def amount(self) -> float:
        return self._amount

    @property
    def label(self) -> int:
        return self._label

    def features(self) -> Tuple[float, ...]:
        return (self._time,) + self._components + (self._amount,)

    def __eq__(self, other) -> bool:
        if isinstance(other, FraudRow):
            return self.features() == other.features() and self._label == other._label
        return False

    def __hash__(self) -> int:
        return hash((self.features(), self._label))

    def __repr__(self) -> str:
        return f"FraudRow(time={self._time}, amount={self._amount}, label={self._label})"


class FraudRecords:
    """
    Parsed transactions stored column-wise.

    :param features: Matrix of shape (N, 30) in header order.
    :type features: numpy.ndarray
    :param labels: Class labels of shape (N,).
    :type labels: numpy.ndarray
    :param path: The file the records came from.
    :type path: str
    """
    def __init__(self, features: np.ndarray, labels: np.ndarray, path: str) -> None:
        self._features = np.asarray(features, dtype=np.float64).reshape(-1, len(FEATURE_COLUMNS))
        self._labels = np.asarray(labels, dtype=np.int64)
        self._features.setflags(write=False)
        self._labels.setflags(write=False)
        self._path = path

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def path(self) -> str:
        return self._path

    @property
    def positives(self) -> int:
        return int(np.sum(self._labels))

    @property
    def negatives(self) -> int:
        return len(self) - self.positives

    def __len__(self) -> int:
        return int(self._labels.shape[0])

    def __getitem__(self, index: int) -> FraudRow:
        values = self._features[index]
        return FraudRow(values[0], values[1:29], values[29], int(self._labels[index]))

    def __iter__(self) -> Iterator[FraudRow]:
        for i in range(len(self)):
            yield self[i]

    def to_dataset(self) -> LabeledDataset:
        return LabeledDataset(self._features, self._labels, {'source': 'fraud-csv', 'path': self._path})


def _parse_float(text: str, column: str, line_number: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CsvParseError(f"column {column}: cannot parse {text!r} as a number", line_number)
    if not math.isfinite(value):
        raise CsvParseError(f"column {column}: non-finite value {text!r}", line_number)
    return value


def _parse_label(text: str, line_number: int) -> int:
    # the published file quotes the class as "0" / "1"
    if text.strip() not in ('0', '1'):
        raise CsvParseError(f"column {LABEL_COLUMN}: expected 0 or 1, got {text!r}", line_number)
    return int(text)


def load_fraud_csv(path: str) -> FraudRecords:
    """
    Loads a card-transaction CSV with the header Time, V1..V28, Amount, Class.

    Parsing is strict: every row must have 31 finite numeric fields and a 0/1 class.

    :param path: The CSV file.
    :type path: str

    :return: The parsed records.
    :rtype: FraudRecords

    :raises FileNotFoundError: If the file does not exist.
    :raises DatasetFormatError: If the file is empty or the header does not match.
    :raises CsvParseError: If a data row is malformed; the message names the line.
    """
    if not os.path.isfile(path):
        logger.error(f"Fraud CSV not found: {path}")
        raise FileNotFoundError(f"Fraud CSV not found: {path}")

    features: List[List[float]] = []
    labels: List[int] = []
    with open(path, 'r', encoding='utf-8', newline='') as file:
        reader = csv.reader(file, strict=True)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError(f"{path} is empty")
        except csv.Error as e:
            raise CsvParseError(str(e), 1)
        header = tuple(name.strip() for name in header)
        if header != HEADER:
            raise DatasetFormatError(f"{path}: unexpected header, expected {len(HEADER)} columns {', '.join(HEADER)}")

        try:
            for fields in reader:
                line_number = reader.line_num
                if not fields:
                    continue
                if len(fields) != len(HEADER):
                    raise CsvParseError(f"expected {len(HEADER)} fields, got {len(fields)}", line_number)
                features.append([
                    _parse_float(text, column, line_number) for text, column in zip(fields[:-1], FEATURE_COLUMNS)
                ])
                labels.append(_parse_label(fields[-1], line_number))
        except csv.Error as e:
            raise CsvParseError(str(e), reader.line_num)

    records = FraudRecords(np.array(features, dtype=np.float64), np.array(labels, dtype=np.int64), path)
    logger.info(f"Loaded {len(records)} transactions from {path}, {records.positives} fraudulent")
    return records
