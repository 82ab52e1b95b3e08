# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

"""
Command-line front end.

Usage::

    qnn-reupload generate circle --train 200 --test 2000 --seed 1 --out data/circle
    qnn-reupload generate fraud --csv creditcard.csv --train 400 --test 400 --seed 1 --out data/fraud
    qnn-reupload train --config config/circle_unitary_experiment_config.yaml --seed 3
    qnn-reupload eval --model results/circle_unitary_model.yaml --dataset results/circle_unitary_test.dataset
    qnn-reupload benchmark exp1 --seeds 0 1 2 3 4
    qnn-reupload plot --results results/circle_unitary_results.yaml

Exit codes: 0 on success, 1 on runtime failures, 2 on usage or validation errors.
"""

from qnn.reupload._version import VERSION
from qnn.reupload.data.dataset_io import load_dataset, save_dataset, save_pca_model, write_manifest
from qnn.reupload.management.benchmark_manager import BenchmarkManager
from qnn.reupload.management.benchmark_manager_callbacks import BenchmarkManagerCallbacks
from qnn.reupload.management.exceptions import ConfigError, EngineError, InvalidArgumentError
from qnn.reupload.management.experiment_config import DatasetConfig, ExperimentConfig
from qnn.reupload.management.experiment_config_manager import ExperimentConfigManager
from qnn.reupload.management.experiment_runner import evaluate, prepare_data, run_experiment
from qnn.reupload.management.logger_module import enable_console_logging, logger
from qnn.reupload.management.metrics import metrics_summary
from qnn.reupload.management.plotting import plot_decision, plot_loss_history
from qnn.reupload.management.results_record import ResultsRecord
from qnn.reupload.management.suites import get_suite, suite_names
from qnn.reupload.management.table_writer import format_table, suite_table, write_table
from qnn.reupload.management.trained_model import TrainedModel
from qnn.reupload.quantum.ansatz import LayerKind, PrepKind
from qnn.reupload.quantum.training import ClassifierConfig, GradientMode, OptimizerKind

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

import yaml


DEFAULT_OUT = 'results'
DEFAULT_SEEDS = [0, 1, 2, 3, 4]


class _ProgressCallbacks(BenchmarkManagerCallbacks):
    def __init__(self, suite) -> None:
        self._suite = suite

    def _label(self, task) -> str:
        row = self._suite.rows[task.row_index]
        return f"{row.layer_type}/{row.initial_prep}/{row.n_layers} seed {task.seed}"

    def on_task_completed(self, task, run_id, result) -> None:
        print(f"{self._label(task)}: test accuracy {result.test_metrics.get('accuracy', 'n/a')}", file=sys.stderr)

    def on_task_failed(self, task, run_id, error) -> None:
        print(f"{self._label(task)}: failed: {error}", file=sys.stderr)


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _merge(target: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in updates.items():
        if value is not None:
            target[key] = value
    return target


def _base_config_data(args: argparse.Namespace) -> Dict[str, Any]:
    if args.config:
        return ExperimentConfig.from_file(args.config).to_dict()
    if getattr(args, 'name', None):
        manager = ExperimentConfigManager(args.config_dir)
        config = manager.get_config(args.name)
        if config is not None:
            return config.to_dict()
        return {'name': args.name}
    return {}


def _resolve_common(args: argparse.Namespace) -> Tuple[str, Optional[int], Optional[ClassifierConfig]]:
    """
    Output folder, seed and decision rule from the flags, falling back to the --config file.
    """
    if not args.config:
        return args.out or DEFAULT_OUT, args.seed, None
    config = ExperimentConfig.from_file(args.config)
    seed = config.seed if args.seed is None else args.seed
    return args.out or config.output_dir, seed, config.classifier


def build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Combines the configuration file (or a named configuration) with command-line overrides.

    :param args: Parsed arguments of the train verb.
    :type args: argparse.Namespace

    :return: The experiment configuration.
    :rtype: ExperimentConfig
    """
    data = _base_config_data(args)
    if args.name:
        data['name'] = args.name

    dataset = dict(data.get('dataset') or {})
    if args.dataset and args.dataset != dataset.get('kind'):
        dataset = {'kind': args.dataset}
    data['dataset'] = _merge(dataset, {
        'train_size': args.train,
        'test_size': args.test,
        'radius': args.radius,
        'csv_path': args.csv,
        'train_path': args.train_file,
        'test_path': args.test_file,
    })

    model = dict(data.get('model') or {})
    if args.layer_kind:
        previous = dict(model.get('ansatz') or {})
        model = {'ansatz': _merge(previous, {'layer_kind': args.layer_kind, 'n_layers': args.layers, 'prep': args.prep})}
    elif args.hidden:
        previous = dict(model.get('mlp') or {})
        model = {'mlp': _merge(previous, {'hidden_units': args.hidden, 'epochs': args.epochs})}
    else:
        if 'ansatz' in model:
            model['ansatz'] = _merge(dict(model['ansatz']), {'n_layers': args.layers, 'prep': args.prep})
        if 'mlp' in model:
            model['mlp'] = _merge(dict(model['mlp']), {'epochs': args.epochs})
    data['model'] = model

    data['training'] = _merge(dict(data.get('training') or {}), {
        'optimizer': args.optimizer,
        'max_iterations': args.max_iterations,
        'learning_rate': args.learning_rate,
        'gradient_mode': args.gradient,
    })
    data['classifier'] = _merge(dict(data.get('classifier') or {}), {'threshold': args.threshold})
    return ExperimentConfig(data).with_overrides(seed=args.seed, output_dir=args.out)


def cmd_generate(args: argparse.Namespace) -> int:
    """
    Writes train and test dataset files and a manifest; the fraud source also writes the PCA model.
    """
    config_dataset = {}
    seed = args.seed
    if args.config:
        config = ExperimentConfig.from_file(args.config)
        config_dataset = config.dataset.to_dict()
        seed = config.seed if seed is None else seed
    seed = 0 if seed is None else seed
    if config_dataset.get('kind') not in (None, args.kind):
        config_dataset = {}
    dataset = DatasetConfig.from_dict(_merge(dict(config_dataset, kind=args.kind), {
        'train_size': args.train,
        'test_size': args.test,
        'radius': args.radius,
        'csv_path': args.csv,
    }))
    for path in dataset.referenced_paths():
        if not os.path.isfile(path):
            raise FileNotFoundError(f"File not found: {path}")

    out = args.out or DEFAULT_OUT
    prepared = prepare_data(dataset, seed)
    files = {
        'train': os.path.join(out, 'train.dataset'),
        'test': os.path.join(out, 'test.dataset'),
    }
    save_dataset(prepared.train, files['train'])
    save_dataset(prepared.test, files['test'])
    manifest: Dict[str, Any] = {
        'tool_version': VERSION,
        'source': dataset.kind.value,
        'seed': seed,
        'dataset': dataset.to_dict(),
        'transforms': prepared.train.meta['transforms'],
        'class_counts': {
            'train': list(prepared.train.class_counts()),
            'test': list(prepared.test.class_counts()),
        },
    }
    if prepared.pca is not None:
        files['pca_model'] = os.path.join(out, 'pca_model.yaml')
        save_pca_model(prepared.pca, files['pca_model'])
        manifest['pca'] = {
            'method': 'raw covariance eigendecomposition, min-max scaled to [-1, 1]',
            'explained_variance_ratio': prepared.pca.explained_variance_ratio.tolist(),
        }
    manifest['files'] = files
    files['manifest'] = os.path.join(out, 'manifest.yaml')
    write_manifest(files['manifest'], manifest)
    print(yaml.dump({'files': files}, sort_keys=False), end='')
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    """
    Trains the configured model and writes the results record, the model file and the datasets used.
    """
    config = build_experiment_config(args)
    config.check_paths()
    record, model, data = run_experiment(config)

    out = config.output_dir
    artifacts = {
        'train_dataset': os.path.join(out, f"{config.name}_train.dataset"),
        'test_dataset': os.path.join(out, f"{config.name}_test.dataset"),
        'model': os.path.join(out, f"{config.name}_model.yaml"),
        'results': os.path.join(out, f"{config.name}_results.yaml"),
    }
    save_dataset(data.train, artifacts['train_dataset'])
    save_dataset(data.test, artifacts['test_dataset'])
    if data.pca is not None:
        artifacts['pca_model'] = os.path.join(out, f"{config.name}_pca_model.yaml")
        save_pca_model(data.pca, artifacts['pca_model'])
    model.save(artifacts['model'])
    for role, path in artifacts.items():
        record.add_artifact(role, path)
    record.save(artifacts['results'])

    print(yaml.dump({
        'name': config.name,
        'seed': config.seed,
        'param_count': model.param_count,
        'depth': model.depth,
        'final_loss': record.report['final_loss'],
        'train': record.train_metrics,
        'test': record.test_metrics,
        'results': artifacts['results'],
    }, sort_keys=False), end='')
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    """
    Scores a saved model on a dataset file, printing and writing the metrics.
    """
    out, _, classifier = _resolve_common(args)
    model = TrainedModel.load(args.model)
    if args.threshold is not None:
        classifier = ClassifierConfig(args.threshold)
    if classifier is not None:
        model = TrainedModel(model.spec, model.params, classifier)
    data = load_dataset(args.dataset)
    summary = metrics_summary(evaluate(model, data))
    result = {
        'tool_version': VERSION,
        'model': args.model,
        'dataset': args.dataset,
        'metrics': summary,
    }
    path = os.path.join(out, f"{_stem(args.dataset)}_eval.yaml")
    os.makedirs(out, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as file:
        yaml.dump(result, file, sort_keys=False)
    print(yaml.dump(summary, sort_keys=False), end='')
    logger.info(f"Wrote evaluation {path}")
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    """
    Runs a benchmark suite over several seeds and writes the table as text and CSV.
    """
    suite = get_suite(args.suite)
    out, seed, _ = _resolve_common(args)
    if args.seeds:
        seeds = args.seeds
    elif seed is not None:
        seeds = [seed]
    else:
        seeds = DEFAULT_SEEDS
    csv_path = args.csv or os.getenv('QNN_FRAUD_CSV')
    if suite.dataset_kind == 'fraud' and not csv_path:
        raise InvalidArgumentError(f"Suite '{suite.name}' needs the transaction CSV (--csv or QNN_FRAUD_CSV)")

    manager = BenchmarkManager(_ProgressCallbacks(suite), max_workers=args.workers)
    tasks = manager.run(suite, seeds, csv_path, out)
    headers, rows = suite_table(suite, tasks)
    title = f"{suite.name}: {suite.description} (seeds {', '.join(str(s) for s in dict.fromkeys(seeds))})"
    write_table(os.path.join(out, f"{suite.name}_table.txt"), headers, rows, title)
    print(format_table(headers, rows, title), end='')
    return 1 if not any(task.succeeded for task in tasks) else 0


def cmd_plot(args: argparse.Namespace) -> int:
    """
    Writes a decision plot, and a loss curve when a results record is given.
    """
    model: Optional[TrainedModel] = None
    record: Optional[ResultsRecord] = None
    dataset_path = args.dataset
    if args.results:
        record = ResultsRecord.load(args.results)
        model = TrainedModel.from_dict(record.model)
        dataset_path = dataset_path or record.artifacts.get('test_dataset')
    elif args.model:
        model = TrainedModel.load(args.model)
    if not dataset_path:
        raise InvalidArgumentError("plot needs --dataset or a results record that names its test dataset")

    data = load_dataset(dataset_path)
    out, _, _ = _resolve_common(args)
    stem = _stem(args.results or args.model or dataset_path)
    path = args.file or os.path.join(out, f"{stem}_decision.svg")
    count = plot_decision(path, data, model, title=args.title)
    written = {'decision_plot': path, 'misclassified': count}
    if record is not None and record.report.get('loss_history'):
        loss_path = os.path.join(out, f"{stem}_loss.svg")
        plot_loss_history(loss_path, {record.config.get('name', stem): record.report['loss_history']})
        written['loss_plot'] = loss_path
    print(yaml.dump(written, sort_keys=False), end='')
    return 0


def _common_parser(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=default, help='Random seed (config: seed)')
    common.add_argument('--out', default=default, help=f'Output folder (config: output.directory, default: {DEFAULT_OUT})')
    common.add_argument('--config', default=default, help='YAML experiment configuration file')
    common.add_argument('--verbose', action='store_true', default=default if suppress else False,
                        help='Log progress to standard error')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser(suppress=True)
    parser = argparse.ArgumentParser(
        prog='qnn-reupload',
        description='Single-qubit data re-uploading classifiers: data, training, evaluation, benchmarks and plots.',
        parents=[_common_parser(suppress=False)],
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    verbs = parser.add_subparsers(dest='verb', required=True)

    generate = verbs.add_parser('generate', parents=[common], help='Generate or prepare train/test dataset files')
    generate.add_argument('kind', choices=['circle', 'fraud'])
    generate.add_argument('--train', type=int, help='Train set size (config: dataset.train_size)')
    generate.add_argument('--test', type=int, help='Test set size (config: dataset.test_size)')
    generate.add_argument('--radius', type=float, help='Circle radius (config: dataset.radius)')
    generate.add_argument('--csv', help='Transaction CSV (config: dataset.csv_path)')
    generate.set_defaults(handler=cmd_generate)

    train = verbs.add_parser('train', parents=[common], help='Train a model and write a results record')
    train.add_argument('--name', help='Experiment name, or a configuration name in --config-dir')
    train.add_argument('--config-dir', help='Folder of *_experiment_config.yaml files')
    train.add_argument('--dataset', choices=['circle', 'fraud', 'file'], help='config: dataset.kind')
    train.add_argument('--train', type=int, help='config: dataset.train_size')
    train.add_argument('--test', type=int, help='config: dataset.test_size')
    train.add_argument('--radius', type=float, help='config: dataset.radius')
    train.add_argument('--csv', help='config: dataset.csv_path')
    train.add_argument('--train-file', help='config: dataset.train_path')
    train.add_argument('--test-file', help='config: dataset.test_path')
    train.add_argument('--layer-kind', choices=[kind.value for kind in LayerKind], help='config: model.ansatz.layer_kind')
    train.add_argument('--layers', type=int, help='config: model.ansatz.n_layers')
    train.add_argument('--prep', choices=[kind.value for kind in PrepKind], help='config: model.ansatz.prep')
    train.add_argument('--hidden', type=int, help='config: model.mlp.hidden_units')
    train.add_argument('--epochs', type=int, help='config: model.mlp.epochs')
    train.add_argument('--optimizer', choices=[kind.value for kind in OptimizerKind], help='config: training.optimizer')
    train.add_argument('--max-iterations', type=int, help='config: training.max_iterations')
    train.add_argument('--learning-rate', type=float, help='config: training.learning_rate')
    train.add_argument('--gradient', choices=[mode.value for mode in GradientMode], help='config: training.gradient_mode')
    train.add_argument('--threshold', type=float, help='config: classifier.threshold')
    train.set_defaults(handler=cmd_train)

    evaluate_verb = verbs.add_parser('eval', parents=[common], help='Score a saved model on a dataset file')
    evaluate_verb.add_argument('--model', required=True, help='Model file or results record')
    evaluate_verb.add_argument('--dataset', required=True, help='Dataset file')
    evaluate_verb.add_argument('--threshold', type=float, help='Override the decision threshold')
    evaluate_verb.set_defaults(handler=cmd_eval)

    benchmark = verbs.add_parser('benchmark', parents=[common], help='Run a benchmark suite')
    benchmark.add_argument('suite', choices=list(suite_names()))
    benchmark.add_argument('--seeds', type=int, nargs='+', help=f'Seeds (default: {DEFAULT_SEEDS})')
    benchmark.add_argument('--csv', help='Transaction CSV for fraud suites (default: $QNN_FRAUD_CSV)')
    benchmark.add_argument('--workers', type=int, help='Worker threads')
    benchmark.set_defaults(handler=cmd_benchmark)

    plot = verbs.add_parser('plot', parents=[common], help='Draw a decision plot as SVG')
    plot.add_argument('--results', help='Results record written by train')
    plot.add_argument('--model', help='Model file')
    plot.add_argument('--dataset', help='Dataset file (default: the test set named in the results record)')
    plot.add_argument('--file', help='Output SVG path')
    plot.add_argument('--title', help='Plot title')
    plot.set_defaults(handler=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs the command line and returns the exit code.

    :param argv: Arguments without the program name; defaults to sys.argv[1:].
    :type argv: Optional[List[str]]

    :return: 0 on success, 1 on runtime failures, 2 on usage or validation errors.
    :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose:
        enable_console_logging()
    try:
        return args.handler(args)
    except (InvalidArgumentError, ConfigError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (EngineError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
