# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import pytest
import os

from qnn.reupload import cli
from qnn.reupload.cli import main
from qnn.reupload.data.dataset_io import load_dataset, read_manifest
from qnn.reupload.management import benchmark_task
from qnn.reupload.management.experiment_config import ExperimentConfig
from qnn.reupload.management.experiment_config_manager import ExperimentConfigManager
from qnn.reupload.management.results_record import ResultsRecord
from qnn.reupload.management.trained_model import TrainedModel

import yaml

from test_benchmark_manager import tiny_suite
from test_experiment_config import generate_experiment_config
from test_fraud import write_fraud_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def train_small(capsys, out, *extra):
    return run(capsys, 'train', '--name', 'small', '--dataset', 'circle', '--train', '20', '--test', '40',
               '--layer-kind', 'uat', '--layers', '2', '--prep', 'u', '--max-iterations', '3',
               '--seed', '2', '--out', str(out), *extra)


def test_version(capsys):
    code, out, _ = run(capsys, '--version')
    assert code == 0
    assert out.startswith('qnn-reupload ')


def test_generate_circle(tmp_path, capsys):
    out = tmp_path / 'circle'
    code, stdout, _ = run(capsys, 'generate', 'circle', '--train', '20', '--test', '30', '--seed', '1', '--out', str(out))
    assert code == 0
    files = yaml.safe_load(stdout)['files']
    assert set(files) == {'train', 'test', 'manifest'}
    train = load_dataset(str(out / 'train.dataset'))
    test = load_dataset(str(out / 'test.dataset'))
    assert len(train) == 20 and len(test) == 30
    assert train.class_counts() == (10, 10)
    manifest = read_manifest(str(out / 'manifest.yaml'))
    assert manifest['source'] == 'circle'
    assert manifest['seed'] == 1
    assert manifest['class_counts'] == {'train': [10, 10], 'test': [15, 15]}


def test_generate_is_deterministic(tmp_path, capsys):
    for name in ('a', 'b'):
        assert run(capsys, 'generate', 'circle', '--train', '10', '--test', '10', '--seed', '5',
                   '--out', str(tmp_path / name))[0] == 0
    assert (tmp_path / 'a' / 'test.dataset').read_bytes() == (tmp_path / 'b' / 'test.dataset').read_bytes()


def test_generate_fraud(tmp_path, capsys):
    csv_path = write_fraud_csv(tmp_path / 'synthetic.csv', n_fraud=30, n_normal=90)
    out = tmp_path / 'fraud'
    code, _, _ = run(capsys, 'generate', 'fraud', '--csv', csv_path, '--train', '20', '--test', '20',
                     '--seed', '1', '--out', str(out))
    assert code == 0
    assert (out / 'pca_model.yaml').exists()
    train = load_dataset(str(out / 'train.dataset'))
    assert train.dim == 2
    assert train.class_counts() == (10, 10)
    assert 'pca' in read_manifest(str(out / 'manifest.yaml'))


def test_generate_fraud_with_missing_csv_writes_nothing(tmp_path, capsys):
    out = tmp_path / 'fraud'
    code, _, err = run(capsys, 'generate', 'fraud', '--csv', str(tmp_path / 'missing.csv'), '--out', str(out))
    assert code == 2
    assert 'missing.csv' in err
    assert not out.exists()


def test_generate_fraud_with_too_few_rows(tmp_path, capsys):
    csv_path = write_fraud_csv(tmp_path / 'synthetic.csv', n_fraud=5, n_normal=90)
    code, _, err = run(capsys, 'generate', 'fraud', '--csv', csv_path, '--train', '20', '--test', '20',
                       '--out', str(tmp_path / 'fraud'))
    assert code == 1
    assert 'deficit' in err


def test_train_then_eval_reproduces_metrics(tmp_path, capsys):
    code, stdout, _ = train_small(capsys, tmp_path)
    assert code == 0
    summary = yaml.safe_load(stdout)
    assert summary['param_count'] == 13
    assert summary['depth'] == 5
    results_path = tmp_path / 'small_results.yaml'
    assert summary['results'] == str(results_path)

    record = ResultsRecord.load(str(results_path))
    assert record.seed == 2
    assert set(record.artifacts) == {'train_dataset', 'test_dataset', 'model', 'results'}
    assert len(record.report['loss_history']) == record.report['iterations'] + 1

    code, stdout, _ = run(capsys, 'eval', '--model', str(results_path),
                          '--dataset', str(tmp_path / 'small_test.dataset'), '--out', str(tmp_path))
    assert code == 0
    assert yaml.safe_load(stdout) == record.test_metrics
    assert (tmp_path / 'small_test_eval.yaml').exists()

    model = TrainedModel.load(str(tmp_path / 'small_model.yaml'))
    assert model.param_count == 13


def test_seeded_training_writes_identical_records(tmp_path, capsys):
    assert train_small(capsys, tmp_path)[0] == 0
    first = (tmp_path / 'small_results.yaml').read_bytes()
    assert train_small(capsys, tmp_path)[0] == 0
    assert (tmp_path / 'small_results.yaml').read_bytes() == first


def test_train_mlp(tmp_path, capsys):
    code, stdout, _ = run(capsys, 'train', '--name', 'net', '--train', '20', '--test', '20', '--hidden', '3',
                          '--epochs', '5', '--out', str(tmp_path))
    assert code == 0
    summary = yaml.safe_load(stdout)
    assert summary['param_count'] == 13
    assert summary['depth'] is None
    assert TrainedModel.load(str(tmp_path / 'net_model.yaml')).family == 'mlp'


def test_train_from_config_file_with_overrides(tmp_path, capsys):
    config_path = tmp_path / 'run_experiment_config.yaml'
    config_path.write_text(ExperimentConfig(generate_experiment_config()).to_yaml(), encoding='utf-8')
    code, stdout, _ = run(capsys, 'train', '--config', str(config_path), '--layers', '1', '--seed', '4',
                          '--out', str(tmp_path))
    assert code == 0
    summary = yaml.safe_load(stdout)
    assert summary['name'] == 'circle_test'
    assert summary['seed'] == 4
    assert summary['param_count'] == 8
    record = ResultsRecord.load(str(tmp_path / 'circle_test_results.yaml'))
    assert record.config['dataset']['train_size'] == 20
    assert record.config['model']['ansatz']['n_layers'] == 1


def test_train_named_config_from_folder(tmp_path, capsys):
    folder = tmp_path / 'configs'
    manager = ExperimentConfigManager(str(folder))
    manager.update_config('stored', ExperimentConfig(generate_experiment_config()).to_yaml())
    manager.save_config('stored')
    code, stdout, _ = run(capsys, 'train', '--name', 'stored', '--config-dir', str(folder), '--out', str(tmp_path))
    assert code == 0
    assert yaml.safe_load(stdout)['param_count'] == 13
    assert (tmp_path / 'stored_results.yaml').exists()


def test_train_file_dataset(tmp_path, capsys):
    assert run(capsys, 'generate', 'circle', '--train', '12', '--test', '12', '--out', str(tmp_path / 'data'))[0] == 0
    code, stdout, _ = run(capsys, 'train', '--name', 'from_files', '--dataset', 'file',
                          '--train-file', str(tmp_path / 'data' / 'train.dataset'),
                          '--test-file', str(tmp_path / 'data' / 'test.dataset'),
                          '--layer-kind', 'unitary', '--layers', '2', '--max-iterations', '2', '--out', str(tmp_path))
    assert code == 0
    assert yaml.safe_load(stdout)['param_count'] == 6


@pytest.mark.parametrize("argv", [
    ['train', '--name', 'nomodel', '--config-dir', 'no-such-folder'],
    ['train', '--name', 'bad', '--layer-kind', 'uat'],
    ['train', '--name', 'bad', '--layer-kind', 'uat', '--layers', '2', '--threshold', '1.5'],
    ['train', '--dataset', 'fraud', '--csv', 'does-not-exist.csv', '--hidden', '3'],
    ['train', '--config', 'does-not-exist.yaml'],
    ['eval', '--model', 'missing.yaml', '--dataset', 'missing.dataset'],
    ['benchmark', 'exp9'],
    ['generate', 'moons'],
    ['plot'],
])
def test_usage_errors_exit_with_2(tmp_path, capsys, argv):
    code, _, _ = run(capsys, *argv, '--out', str(tmp_path))
    assert code == 2


def test_benchmark_fraud_needs_csv(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv('QNN_FRAUD_CSV', raising=False)
    code, _, err = run(capsys, 'benchmark', 'fraud', '--out', str(tmp_path))
    assert code == 2
    assert 'QNN_FRAUD_CSV' in err


def test_benchmark_writes_table(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, 'get_suite', lambda name: tiny_suite())
    code, stdout, err = run(capsys, 'benchmark', 'exp1', '--seeds', '0', '1', '--out', str(tmp_path))
    assert code == 0
    assert stdout.startswith('tiny:')
    assert (tmp_path / 'tiny_table.txt').read_text(encoding='utf-8') == stdout
    assert (tmp_path / 'tiny_table.csv').exists()
    assert 'seed 1: test accuracy' in err


def test_benchmark_exits_1_when_every_task_fails(tmp_path, capsys, monkeypatch):
    def broken(config, data):
        raise RuntimeError("no luck")

    monkeypatch.setattr(cli, 'get_suite', lambda name: tiny_suite())
    monkeypatch.setattr(benchmark_task, 'run_experiment', broken)
    code, stdout, err = run(capsys, 'benchmark', 'exp1', '--seed', '0', '--out', str(tmp_path))
    assert code == 1
    assert 'all failed' in stdout
    assert 'failed: no luck' in err


def test_plot_from_results(tmp_path, capsys):
    assert train_small(capsys, tmp_path)[0] == 0
    code, stdout, _ = run(capsys, 'plot', '--results', str(tmp_path / 'small_results.yaml'),
                          '--title', 'small', '--out', str(tmp_path))
    assert code == 0
    written = yaml.safe_load(stdout)
    assert os.path.isfile(written['decision_plot'])
    assert os.path.isfile(written['loss_plot'])
    assert written['decision_plot'].endswith('small_results_decision.svg')


def test_plot_dataset_only(tmp_path, capsys):
    assert run(capsys, 'generate', 'circle', '--train', '10', '--test', '10', '--out', str(tmp_path))[0] == 0
    target = tmp_path / 'points.svg'
    code, stdout, _ = run(capsys, 'plot', '--dataset', str(tmp_path / 'train.dataset'), '--file', str(target))
    assert code == 0
    assert target.exists()
    assert yaml.safe_load(stdout)['misclassified'] == 0


def write_config(tmp_path, updates):
    path = tmp_path / 'shared_experiment_config.yaml'
    path.write_text(ExperimentConfig(generate_experiment_config(updates)).to_yaml(), encoding='utf-8')
    return str(path)


def test_eval_and_plot_take_output_folder_and_threshold_from_config(tmp_path, capsys):
    assert train_small(capsys, tmp_path)[0] == 0
    configured = tmp_path / 'configured'
    config_path = write_config(tmp_path, {'classifier': {'threshold': 0.9}, 'output': {'directory': str(configured)}})
    dataset = str(tmp_path / 'small_test.dataset')
    code, stdout, _ = run(capsys, 'eval', '--model', str(tmp_path / 'small_model.yaml'), '--dataset', dataset,
                          '--config', config_path)
    assert code == 0
    assert (configured / 'small_test_eval.yaml').exists()
    _, explicit, _ = run(capsys, 'eval', '--model', str(tmp_path / 'small_model.yaml'), '--dataset', dataset,
                         '--threshold', '0.9', '--out', str(tmp_path / 'explicit'))
    assert yaml.safe_load(stdout) == yaml.safe_load(explicit)

    code, stdout, _ = run(capsys, 'plot', '--results', str(tmp_path / 'small_results.yaml'), '--config', config_path)
    assert code == 0
    assert yaml.safe_load(stdout)['decision_plot'] == os.path.join(str(configured), 'small_results_decision.svg')


def test_benchmark_takes_seed_and_output_folder_from_config(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, 'get_suite', lambda name: tiny_suite())
    configured = tmp_path / 'configured'
    config_path = write_config(tmp_path, {'seed': 1, 'output': {'directory': str(configured)}})
    code, stdout, err = run(capsys, 'benchmark', 'exp1', '--config', config_path)
    assert code == 0
    assert (configured / 'tiny_table.txt').exists()
    assert 'seed 1: test accuracy' in err
    assert 'seed 0:' not in err


def test_missing_config_file_is_a_usage_error_for_every_verb(tmp_path, capsys):
    for argv in (['eval', '--model', 'm.yaml', '--dataset', 'd.dataset'], ['benchmark', 'exp1'], ['plot', '--dataset', 'd.dataset']):
        code, _, _ = run(capsys, *argv, '--config', str(tmp_path / 'missing.yaml'))
        assert code == 2
