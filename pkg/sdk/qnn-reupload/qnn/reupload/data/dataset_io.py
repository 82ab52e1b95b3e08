# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

"""
On-disk formats for datasets, PCA models and dataset manifests.

A dataset file is line oriented text::

    QNN-DATASET 1
    meta {"seed": 7, "source": "circle", "transforms": []}
    rows=200 dim=2
    0x1.8p-1 -0x1.0p-2 1
    ...

Features are written as hex floats so that a round trip is bit exact.
"""

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.data.pca import PcaModel
from qnn.reupload.management.exceptions import DatasetFormatError, InvalidArgumentError
from qnn.reupload.management.logger_module import logger

import json
import os
import re
from typing import Any, Dict

import numpy as np
import yaml


MAGIC = 'QNN-DATASET'
FORMAT_VERSION = 1
_SHAPE_PATTERN = re.compile(r'^rows=(\d+) dim=(\d+)$')


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def _write_atomically(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    temp_path = f"{path}.tmp"
    try:
        with open(temp_path, 'w', encoding='utf-8', newline='\n') as file:
            file.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise


def save_dataset(data: LabeledDataset, path: str) -> None:
    """
    Writes a dataset with its provenance record.

    :param data: The dataset.
    :type data: LabeledDataset
    :param path: The output file.
    :type path: str
    """
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        "meta " + json.dumps(data.meta, sort_keys=True, default=_json_default),
        f"rows={len(data)} dim={data.dim}",
    ]
    for row, label in zip(data.features, data.labels):
        lines.append(' '.join(float(v).hex() for v in row) + f" {int(label)}")
    _write_atomically(path, '\n'.join(lines) + '\n')
    logger.info(f"Wrote {len(data)} rows to {path}")


def load_dataset(path: str) -> LabeledDataset:
    """
    Reads a dataset written by save_dataset.

    :param path: The dataset file.
    :type path: str

    :return: The dataset.
    :rtype: LabeledDataset

    :raises FileNotFoundError: If the file does not exist.
    :raises DatasetFormatError: On a version mismatch, truncation or corruption.
    """
    if not os.path.isfile(path):
        logger.error(f"Dataset file not found: {path}")
        raise FileNotFoundError(f"Dataset file not found: {path}")
    with open(path, 'r', encoding='utf-8') as file:
        lines = file.read().split('\n')
    if lines and lines[-1] == '':
        lines.pop()

    if len(lines) < 3:
        raise DatasetFormatError(f"{path}: truncated header")
    magic = lines[0].split(' ')
    if len(magic) != 2 or magic[0] != MAGIC:
        raise DatasetFormatError(f"{path}: not a dataset file")
    if magic[1] != str(FORMAT_VERSION):
        raise DatasetFormatError(f"{path}: unsupported format version {magic[1]}, expected {FORMAT_VERSION}")
    if not lines[1].startswith('meta '):
        raise DatasetFormatError(f"{path}: missing meta line")
    try:
        meta = json.loads(lines[1][len('meta '):])
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"{path}: corrupt meta line: {e}")
    if not isinstance(meta, dict):
        raise DatasetFormatError(f"{path}: meta must be a mapping")
    shape = _SHAPE_PATTERN.match(lines[2])
    if shape is None:
        raise DatasetFormatError(f"{path}: corrupt shape line {lines[2]!r}")
    rows, dim = int(shape.group(1)), int(shape.group(2))

    body = lines[3:]
    if len(body) != rows:
        raise DatasetFormatError(f"{path}: expected {rows} rows, found {len(body)}")
    features = np.empty((rows, dim), dtype=np.float64)
    labels = np.empty(rows, dtype=np.int64)
    for i, line in enumerate(body):
        fields = line.split(' ')
        if len(fields) != dim + 1:
            raise DatasetFormatError(f"{path}: line {i + 4} has {len(fields)} fields, expected {dim + 1}")
        try:
            features[i] = [float.fromhex(text) for text in fields[:dim]]
        except ValueError:
            raise DatasetFormatError(f"{path}: line {i + 4} holds a malformed number")
        if fields[dim] not in ('0', '1'):
            raise DatasetFormatError(f"{path}: line {i + 4} holds label {fields[dim]!r}")
        labels[i] = int(fields[dim])

    try:
        data = LabeledDataset(features, labels, meta)
    except InvalidArgumentError as e:
        raise DatasetFormatError(f"{path}: {e}")
    logger.info(f"Loaded {rows} rows from {path}")
    return data


def save_pca_model(model: PcaModel, path: str) -> None:
    record = {'format_version': FORMAT_VERSION, 'pca': model.to_dict()}
    _write_atomically(path, yaml.dump(record, sort_keys=False))
    logger.info(f"Wrote PCA model to {path}")


def load_pca_model(path: str) -> PcaModel:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"PCA model file not found: {path}")
    with open(path, 'r', encoding='utf-8') as file:
        try:
            record = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise DatasetFormatError(f"{path}: {e}")
    if not isinstance(record, dict) or 'pca' not in record:
        raise DatasetFormatError(f"{path}: not a PCA model file")
    if record.get('format_version') != FORMAT_VERSION:
        raise DatasetFormatError(f"{path}: unsupported format version {record.get('format_version')}")
    try:
        return PcaModel.from_dict(record['pca'])
    except InvalidArgumentError as e:
        raise DatasetFormatError(f"{path}: {e}")


def write_manifest(path: str, manifest: Dict[str, Any]) -> None:
    """
    Writes a YAML manifest describing generated files and how they were produced.

    :param path: The manifest file.
    :type path: str
    :param manifest: Source, seed, transform chain and file entries.
    :type manifest: Dict[str, Any]
    """
    text = yaml.dump(json.loads(json.dumps(manifest, default=_json_default)), sort_keys=False)
    _write_atomically(path, text)
    logger.info(f"Wrote manifest {path}")


def read_manifest(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as file:
        try:
            manifest = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise DatasetFormatError(f"{path}: {e}")
    if not isinstance(manifest, dict):
        raise DatasetFormatError(f"{path}: manifest must be a mapping")
    return manifest
