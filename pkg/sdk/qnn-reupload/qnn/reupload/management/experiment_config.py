# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.classical.mlp import DEFAULT_EPOCHS, MlpSpec
from qnn.reupload.management.exceptions import ConfigError, InvalidArgumentError, InvalidYAMLError
from qnn.reupload.management.logger_module import logger
from qnn.reupload.optimizers import ADAM_LEARNING_RATE
from qnn.reupload.quantum.ansatz import AnsatzSpec
from qnn.reupload.quantum.training import ClassifierConfig, TrainConfig

import os
from enum import Enum
from typing import Any, Dict, List, Optional

import yaml


class DatasetKind(Enum):
    """
    An enum for the dataset sources an experiment can use.
    """
    CIRCLE = 'circle'
    """Generated points labeled by a circle around the origin"""
    FRAUD = 'fraud'
    """The card-transaction CSV, reduced by PCA and sampled 50-50"""
    FILE = 'file'
    """Train and test sets read from dataset files"""


DEFAULT_SIZES = {
    DatasetKind.CIRCLE: (200, 2000),
    DatasetKind.FRAUD: (400, 400),
    DatasetKind.FILE: (200, 2000),
}


class DatasetConfig:
    """
    A class representing where an experiment's train and test data come from.

    :param kind: The dataset source.
    :type kind: DatasetKind
    :param train_size: Number of training rows for generated or sampled data; defaults depend on the source.
    :type train_size: Optional[int]
    :param test_size: Number of test rows for generated or sampled data; defaults depend on the source.
    :type test_size: Optional[int]
    :param radius: Circle radius for the circle source.
    :type radius: float
    :param csv_path: Path of the transaction CSV for the fraud source.
    :type csv_path: Optional[str]
    :param train_path: Train dataset file for the file source.
    :type train_path: Optional[str]
    :param test_path: Test dataset file for the file source.
    :type test_path: Optional[str]
    """
    def __init__(
            self,
            kind: DatasetKind = DatasetKind.CIRCLE,
            train_size: Optional[int] = None,
            test_size: Optional[int] = None,
            radius: float = 1.0,
            csv_path: Optional[str] = None,
            train_path: Optional[str] = None,
            test_path: Optional[str] = None
    ) -> None:
        self._kind = DatasetKind(kind)
        default_train, default_test = DEFAULT_SIZES[self._kind]
        train_size = default_train if train_size is None else train_size
        test_size = default_test if test_size is None else test_size
        for name, value in (('train_size', train_size), ('test_size', test_size)):
            if isinstance(value, bool) or int(value) != value or value < 2:
                raise ConfigError(f"dataset.{name} must be an integer of at least 2, got {value}")
        if self._kind == DatasetKind.FRAUD and not csv_path:
            raise ConfigError("dataset.csv_path is required for the fraud source")
        if self._kind == DatasetKind.FILE and not (train_path and test_path):
            raise ConfigError("dataset.train_path and dataset.test_path are required for the file source")
        self._train_size = int(train_size)
        self._test_size = int(test_size)
        self._radius = float(radius)
        self._csv_path = csv_path
        self._train_path = train_path
        self._test_path = test_path

    @property
    def kind(self) -> DatasetKind:
        return self._kind

    @property
    def train_size(self) -> int:
        return self._train_size

    @property
    def test_size(self) -> int:
        return self._test_size

    @property
    def radius(self) -> float:
        return self._radius

    @property
    def csv_path(self) -> Optional[str]:
        return self._csv_path

    @property
    def train_path(self) -> Optional[str]:
        return self._train_path

    @property
    def test_path(self) -> Optional[str]:
        return self._test_path

    def referenced_paths(self) -> List[str]:
        if self._kind == DatasetKind.FRAUD:
            return [self._csv_path]
        if self._kind == DatasetKind.FILE:
            return [self._train_path, self._test_path]
        return []

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'kind': self._kind.value,
            'train_size': self._train_size,
            'test_size': self._test_size,
        }
        if self._kind == DatasetKind.CIRCLE:
            data['radius'] = self._radius
        elif self._kind == DatasetKind.FRAUD:
            data['csv_path'] = self._csv_path
        else:
            data['train_path'] = self._train_path
            data['test_path'] = self._test_path
        return data

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'DatasetConfig':
        data = data or {}
        try:
            return cls(
                kind=DatasetKind(data.get('kind', DatasetKind.CIRCLE.value)),
                train_size=data.get('train_size'),
                test_size=data.get('test_size'),
                radius=float(data.get('radius', 1.0)),
                csv_path=data.get('csv_path'),
                train_path=data.get('train_path'),
                test_path=data.get('test_path'),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid dataset section: {e}")


class MlpConfig:
    """
    A class representing the classical baseline model and its training schedule.

    :param hidden_units: Number of hidden sigmoid units.
    :type hidden_units: int
    :param epochs: Number of full-batch Adam steps.
    :type epochs: int
    :param learning_rate: Adam step size.
    :type learning_rate: float
    """
    def __init__(self, hidden_units: int, epochs: int = DEFAULT_EPOCHS, learning_rate: float = ADAM_LEARNING_RATE) -> None:
        if isinstance(epochs, bool) or int(epochs) != epochs or epochs < 0:
            raise ConfigError(f"model.mlp.epochs must be a non-negative integer, got {epochs}")
        if not learning_rate > 0.0:
            raise ConfigError(f"model.mlp.learning_rate must be positive, got {learning_rate}")
        self._spec = MlpSpec(hidden_units)
        self._epochs = int(epochs)
        self._learning_rate = float(learning_rate)

    @property
    def spec(self) -> MlpSpec:
        return self._spec

    @property
    def epochs(self) -> int:
        return self._epochs

    @property
    def learning_rate(self) -> float:
        return self._learning_rate

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hidden_units': self._spec.hidden_units,
            'epochs': self._epochs,
            'learning_rate': self._learning_rate,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MlpConfig':
        if 'hidden_units' not in data:
            raise ConfigError("model.mlp.hidden_units is required")
        return cls(data['hidden_units'], data.get('epochs', DEFAULT_EPOCHS),
                   float(data.get('learning_rate', ADAM_LEARNING_RATE)))


class ExperimentConfig:
    """
    A class representing one experiment: dataset, model, training, decision rule and output folder.

    Exactly one of ansatz and mlp is set.

    :param config_data: The configuration as a dictionary with the sections
        name, seed, dataset, model (ansatz or mlp), training, classifier and output.
    :type config_data: Dict[str, Any]
    """
    def __init__(self, config_data: Dict[str, Any]) -> None:
        if not isinstance(config_data, dict):
            raise ConfigError("Configuration data must be a dictionary")
        self._name = str(config_data.get('name', 'experiment'))
        seed = config_data.get('seed', 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
        self._seed = seed

        model = config_data.get('model')
        if not isinstance(model, dict):
            raise ConfigError("The 'model' section is required")
        if ('ansatz' in model) == ('mlp' in model):
            raise ConfigError("The 'model' section must select exactly one of 'ansatz' and 'mlp'")

        try:
            self._dataset = DatasetConfig.from_dict(config_data.get('dataset'))
            self._ansatz = AnsatzSpec.from_dict(model['ansatz']) if 'ansatz' in model else None
            self._mlp = MlpConfig.from_dict(model['mlp']) if 'mlp' in model else None
            self._training = TrainConfig.from_dict(config_data.get('training')).with_seed(self._seed)
            self._classifier = ClassifierConfig.from_dict(config_data.get('classifier'))
        except InvalidArgumentError as e:
            raise ConfigError(f"Invalid configuration '{self._name}': {e}")

        output = config_data.get('output') or {}
        self._output_dir = str(output.get('directory', 'results'))

    @property
    def name(self) -> str:
        return self._name

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def dataset(self) -> DatasetConfig:
        return self._dataset

    @property
    def ansatz(self) -> Optional[AnsatzSpec]:
        return self._ansatz

    @property
    def mlp(self) -> Optional[MlpConfig]:
        return self._mlp

    @property
    def training(self) -> TrainConfig:
        return self._training

    @property
    def classifier(self) -> ClassifierConfig:
        return self._classifier

    @property
    def output_dir(self) -> str:
        return self._output_dir

    @property
    def model_family(self) -> str:
        return 'ansatz' if self._ansatz is not None else 'mlp'

    def with_overrides(
            self,
            seed: Optional[int] = None,
            output_dir: Optional[str] = None
    ) -> 'ExperimentConfig':
        """
        Creates a copy with command-line overrides applied.

        :param seed: New seed, or None to keep the current one.
        :type seed: Optional[int]
        :param output_dir: New output folder, or None to keep the current one.
        :type output_dir: Optional[str]

        :return: The new configuration.
        :rtype: ExperimentConfig
        """
        data = self.to_dict()
        if seed is not None:
            data['seed'] = seed
        if output_dir is not None:
            data['output'] = {'directory': output_dir}
        return ExperimentConfig(data)

    def check_paths(self) -> None:
        """
        Checks that every file the dataset section refers to exists.

        :raises FileNotFoundError: If a referenced file is missing.
        """
        for path in self._dataset.referenced_paths():
            if not os.path.isfile(path):
                logger.error(f"Configuration '{self._name}' refers to a missing file: {path}")
                raise FileNotFoundError(f"File not found: {path}")

    def to_dict(self) -> Dict[str, Any]:
        model = {'ansatz': self._ansatz.to_dict()} if self._ansatz is not None else {'mlp': self._mlp.to_dict()}
        training = self._training.to_dict()
        training.pop('rng_seed')
        return {
            'name': self._name,
            'seed': self._seed,
            'dataset': self._dataset.to_dict(),
            'model': model,
            'training': training,
            'classifier': self._classifier.to_dict(),
            'output': {'directory': self._output_dir},
        }

    def to_yaml(self) -> str:
        return yaml.dump(self.to_dict(), sort_keys=False)

    @classmethod
    def from_yaml(cls, text: str) -> 'ExperimentConfig':
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise InvalidYAMLError(f"Invalid YAML format: {e}")
        return cls(data)

    @classmethod
    def from_file(cls, path: str) -> 'ExperimentConfig':
        """
        Loads an experiment configuration from a YAML file.

        :param path: The file path.
        :type path: str

        :return: The configuration.
        :rtype: ExperimentConfig
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Configuration file not found: {path}")
        logger.info(f"Loading experiment configuration from '{path}'")
        with open(path, 'r', encoding='utf-8') as file:
            return cls.from_yaml(file.read())
