# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.classical.mlp import MlpSpec, mlp_train
from qnn.reupload.data.circle import gen_circle
from qnn.reupload.data.dataset_io import load_dataset
from qnn.reupload.data.fraud import load_fraud_csv
from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.data.pca import PcaModel, apply_pca, fit_pca
from qnn.reupload.data.sampling import balanced_sample
from qnn.reupload.management.experiment_config import DatasetConfig, DatasetKind, ExperimentConfig
from qnn.reupload.management.logger_module import logger
from qnn.reupload.management.metrics import ConfusionMatrix, confusion, metrics_summary
from qnn.reupload.management.results_record import ResultsRecord
from qnn.reupload.management.trained_model import TrainedModel
from qnn.reupload.quantum.training import train

import os
import threading
from typing import Any, Dict, Optional, Tuple


_fraud_cache: Dict[str, Tuple[LabeledDataset, PcaModel]] = {}
_fraud_cache_lock = threading.Lock()


class PreparedData:
    """
    Train and test sets of an experiment, with the PCA model when one was fitted.

    :param train: The training set.
    :type train: LabeledDataset
    :param test: The test set.
    :type test: LabeledDataset
    :param pca: The fitted PCA model, for the fraud source.
    :type pca: Optional[PcaModel]
    """
    def __init__(self, train: LabeledDataset, test: LabeledDataset, pca: Optional[PcaModel] = None) -> None:
        self.train = train
        self.test = test
        self.pca = pca


def split_seeds(seed: int) -> Tuple[int, int]:
    """
    Seeds for generating the train and test sets of one experiment seed.

    :param seed: The experiment seed.
    :type seed: int

    :return: (train seed, test seed), distinct for every experiment seed.
    :rtype: Tuple[int, int]
    """
    return 2 * seed, 2 * seed + 1


def load_projected_fraud(csv_path: str) -> Tuple[LabeledDataset, PcaModel]:
    """
    Loads the transaction CSV, fits PCA on all rows and projects them to [-1, 1]^2.
    Results are cached per absolute path for the lifetime of the process.

    :param csv_path: The CSV file.
    :type csv_path: str

    :return: The projected dataset and the PCA model.
    :rtype: Tuple[LabeledDataset, PcaModel]
    """
    key = os.path.abspath(csv_path)
    with _fraud_cache_lock:
        if key not in _fraud_cache:
            records = load_fraud_csv(csv_path)
            model = fit_pca(records, out_dim=2)
            _fraud_cache[key] = (apply_pca(model, records), model)
        return _fraud_cache[key]


def prepare_data(dataset: DatasetConfig, seed: int) -> PreparedData:
    """
    Builds the train and test sets an experiment configuration describes.

    :param dataset: The dataset section.
    :type dataset: DatasetConfig
    :param seed: The experiment seed.
    :type seed: int

    :return: The prepared data.
    :rtype: PreparedData
    """
    if dataset.kind == DatasetKind.CIRCLE:
        train_seed, test_seed = split_seeds(seed)
        return PreparedData(
            gen_circle(dataset.train_size, train_seed, radius=dataset.radius),
            gen_circle(dataset.test_size, test_seed, radius=dataset.radius),
        )
    if dataset.kind == DatasetKind.FRAUD:
        projected, model = load_projected_fraud(dataset.csv_path)
        train_set, test_set = balanced_sample(projected, dataset.train_size, dataset.test_size, seed)
        return PreparedData(train_set, test_set, model)
    return PreparedData(load_dataset(dataset.train_path), load_dataset(dataset.test_path))


def evaluate(model: TrainedModel, data: LabeledDataset) -> ConfusionMatrix:
    """
    Confusion counts of a model on a dataset.

    :param model: The trained model.
    :type model: TrainedModel
    :param data: The labeled data.
    :type data: LabeledDataset

    :return: The confusion matrix.
    :rtype: ConfusionMatrix
    """
    return confusion(model.predict(data.features), data.labels)


def train_model(config: ExperimentConfig, data: LabeledDataset) -> Tuple[TrainedModel, Dict[str, Any]]:
    """
    Trains the model family the configuration selects.

    :param config: The experiment configuration.
    :type config: ExperimentConfig
    :param data: The training data.
    :type data: LabeledDataset

    :return: The trained model and the serializable training report.
    :rtype: Tuple[TrainedModel, Dict[str, Any]]
    """
    if config.ansatz is not None:
        report = train(config.ansatz, data, config.training)
        model = TrainedModel(config.ansatz, report.params, config.classifier)
        report_data = report.to_dict()
    else:
        spec = MlpSpec(config.mlp.spec.hidden_units, input_dim=data.dim)
        result = mlp_train(spec, data, epochs=config.mlp.epochs, seed=config.seed,
                           learning_rate=config.mlp.learning_rate)
        model = TrainedModel(spec, result.params)
        report_data = {'optimizer': 'adam', **result.to_dict()}
    report_data.pop('params', None)
    return model, report_data


def run_experiment(
        config: ExperimentConfig,
        data: Optional[PreparedData] = None
) -> Tuple[ResultsRecord, TrainedModel, PreparedData]:
    """
    Prepares the data, trains the model and scores it on both splits.

    :param config: The experiment configuration.
    :type config: ExperimentConfig
    :param data: Already prepared data, or None to build it from the configuration.
    :type data: Optional[PreparedData]

    :return: The results record (without artifacts), the trained model and the data used.
    :rtype: Tuple[ResultsRecord, TrainedModel, PreparedData]
    """
    if data is None:
        config.check_paths()
        data = prepare_data(config.dataset, config.seed)
    logger.info(f"Running experiment '{config.name}' with seed {config.seed}")
    model, report = train_model(config, data.train)
    train_cm = evaluate(model, data.train)
    test_cm = evaluate(model, data.test)
    record = ResultsRecord(
        config=config.to_dict(),
        model=model.to_dict(),
        report=report,
        train_metrics=metrics_summary(train_cm),
        test_metrics=metrics_summary(test_cm),
        seed=config.seed,
    )
    logger.info(f"Experiment '{config.name}' seed {config.seed}: "
                f"train accuracy {record.train_metrics.get('accuracy')}, test accuracy {record.test_metrics.get('accuracy')}")
    return record, model, data
