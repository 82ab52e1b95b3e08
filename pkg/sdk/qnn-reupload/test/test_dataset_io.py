# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import pytest

from qnn.reupload.data import dataset_io
from qnn.reupload.data.circle import gen_circle
from qnn.reupload.data.dataset_io import (
    load_dataset, load_pca_model, read_manifest, save_dataset, save_pca_model, write_manifest,
)
from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.data.pca import fit_pca
from qnn.reupload.data.sampling import balanced_sample
from qnn.reupload.management.exceptions import DatasetFormatError

import numpy as np


def test_round_trip_is_bit_exact(tmp_path):
    data = gen_circle(50, seed=3)
    path = str(tmp_path / 'train.dataset')
    save_dataset(data, path)
    loaded = load_dataset(path)
    assert loaded == data
    assert loaded.features.tobytes() == data.features.tobytes()


def test_saving_twice_gives_identical_files(tmp_path):
    data = gen_circle(20, seed=1)
    save_dataset(data, str(tmp_path / 'a.dataset'))
    save_dataset(data, str(tmp_path / 'b.dataset'))
    assert (tmp_path / 'a.dataset').read_bytes() == (tmp_path / 'b.dataset').read_bytes()
    assert not (tmp_path / 'a.dataset.tmp').exists()


def test_failed_write_leaves_no_temporary_file(tmp_path, monkeypatch):
    path = tmp_path / 'train.dataset'
    save_dataset(gen_circle(10, seed=0), str(path))
    before = path.read_bytes()

    def failing_replace(source, target):
        raise OSError("disk full")

    monkeypatch.setattr(dataset_io.os, 'replace', failing_replace)
    with pytest.raises(OSError):
        save_dataset(gen_circle(12, seed=1), str(path))
    assert not (tmp_path / 'train.dataset.tmp').exists()
    assert path.read_bytes() == before


def test_file_layout(tmp_path):
    data = LabeledDataset([[0.75, -0.25], [0.0, 1.0]], [1, 0], {'source': 'test', 'seed': 7})
    path = tmp_path / 'small.dataset'
    save_dataset(data, str(path))
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'QNN-DATASET 1'
    assert lines[1] == 'meta {"seed": 7, "source": "test", "transforms": []}'
    assert lines[2] == 'rows=2 dim=2'
    assert lines[3] == '0x1.8000000000000p-1 -0x1.0000000000000p-2 1'
    assert lines[4] == '0x0.0p+0 0x1.0000000000000p+0 0'


def test_sampled_provenance_survives(tmp_path):
    source = gen_circle(40, seed=0)
    train, _ = balanced_sample(source, n_train=10, n_test=10, seed=2)
    path = str(tmp_path / 'train.dataset')
    save_dataset(train, path)
    assert load_dataset(path).meta['source_rows'] == train.meta['source_rows']


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(str(tmp_path / 'missing.dataset'))


def corrupt(tmp_path, transform):
    path = tmp_path / 'corrupt.dataset'
    save_dataset(gen_circle(6, seed=0), str(path))
    lines = path.read_text(encoding='utf-8').splitlines()
    path.write_text('\n'.join(transform(lines)) + '\n', encoding='utf-8')
    return str(path)


@pytest.mark.parametrize("transform", [
    lambda lines: lines[:-2],
    lambda lines: lines[:2],
    lambda lines: ['QNN-DATASET 2'] + lines[1:],
    lambda lines: ['SOMETHING 1'] + lines[1:],
    lambda lines: lines[:1] + ['meta {broken'] + lines[2:],
    lambda lines: lines[:2] + ['rows=six dim=2'] + lines[3:],
    lambda lines: lines[:3] + ['0x1.0p-1 1'] + lines[4:],
    lambda lines: lines[:3] + ['0x1.0p-1 zz 1'] + lines[4:],
    lambda lines: lines[:3] + ['0x1.0p-1 0x1.0p-1 2'] + lines[4:],
], ids=['truncated', 'header-only', 'version', 'magic', 'meta', 'shape', 'fields', 'number', 'label'])
def test_corrupt_files_are_rejected(tmp_path, transform):
    with pytest.raises(DatasetFormatError):
        load_dataset(corrupt(tmp_path, transform))


def test_pca_model_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    model = fit_pca(rng.normal(size=(50, 4)))
    path = str(tmp_path / 'pca_model.yaml')
    save_pca_model(model, path)
    loaded = load_pca_model(path)
    assert np.array_equal(loaded.components, model.components)
    assert np.array_equal(loaded.mean, model.mean)
    assert np.array_equal(loaded.scale_min, model.scale_min)


def test_pca_model_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_pca_model(str(tmp_path / 'missing.yaml'))
    path = tmp_path / 'bad.yaml'
    path.write_text('format_version: 9\npca: {}\n', encoding='utf-8')
    with pytest.raises(DatasetFormatError):
        load_pca_model(str(path))
    path.write_text('- just\n- a list\n', encoding='utf-8')
    with pytest.raises(DatasetFormatError):
        load_pca_model(str(path))


def test_manifest_round_trip(tmp_path):
    path = str(tmp_path / 'manifest.yaml')
    manifest = {'kind': 'circle', 'seed': np.int64(3), 'files': {'train': 'train.dataset'}, 'sizes': np.array([2, 4])}
    write_manifest(path, manifest)
    assert read_manifest(path) == {'kind': 'circle', 'seed': 3, 'files': {'train': 'train.dataset'}, 'sizes': [2, 4]}
