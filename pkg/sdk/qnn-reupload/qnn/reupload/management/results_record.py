# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload._version import VERSION
from qnn.reupload.management.exceptions import DatasetFormatError
from qnn.reupload.management.logger_module import logger

import os
from typing import Any, Dict, Optional

import yaml


class ResultsRecord:
    """
    Everything needed to understand and re-run one experiment: the configuration, the trained
    model, the training report, the metrics on both splits and the files written.

    :param config: The experiment configuration as a dictionary.
    :type config: Dict[str, Any]
    :param model: The trained model as a dictionary.
    :type model: Dict[str, Any]
    :param report: The training report as a dictionary.
    :type report: Dict[str, Any]
    :param train_metrics: Confusion counts and metrics on the training data.
    :type train_metrics: Dict[str, Any]
    :param test_metrics: Confusion counts and metrics on the test data.
    :type test_metrics: Dict[str, Any]
    :param artifacts: Paths of the files written, by role.
    :type artifacts: Optional[Dict[str, str]]
    :param seed: The experiment seed.
    :type seed: int
    :param tool_version: Version of the package that produced the record.
    :type tool_version: str
    """
    def __init__(
            self,
            config: Dict[str, Any],
            model: Dict[str, Any],
            report: Dict[str, Any],
            train_metrics: Dict[str, Any],
            test_metrics: Dict[str, Any],
            artifacts: Optional[Dict[str, str]] = None,
            seed: int = 0,
            tool_version: str = VERSION
    ) -> None:
        self._config = config
        self._model = model
        self._report = report
        self._train_metrics = train_metrics
        self._test_metrics = test_metrics
        self._artifacts = dict(artifacts or {})
        self._seed = seed
        self._tool_version = tool_version

    @property
    def config(self) -> Dict[str, Any]:
        return self._config

    @property
    def model(self) -> Dict[str, Any]:
        return self._model

    @property
    def report(self) -> Dict[str, Any]:
        return self._report

    @property
    def train_metrics(self) -> Dict[str, Any]:
        return self._train_metrics

    @property
    def test_metrics(self) -> Dict[str, Any]:
        return self._test_metrics

    @property
    def artifacts(self) -> Dict[str, str]:
        return self._artifacts

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def tool_version(self) -> str:
        return self._tool_version

    def add_artifact(self, role: str, path: str) -> None:
        self._artifacts[role] = path

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tool_version': self._tool_version,
            'seed': self._seed,
            'config': self._config,
            'model': self._model,
            'report': self._report,
            'metrics': {'train': self._train_metrics, 'test': self._test_metrics},
            'artifacts': self._artifacts,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ResultsRecord':
        try:
            return cls(
                config=data['config'],
                model=data['model'],
                report=data['report'],
                train_metrics=data['metrics']['train'],
                test_metrics=data['metrics']['test'],
                artifacts=data.get('artifacts'),
                seed=data.get('seed', 0),
                tool_version=data.get('tool_version', VERSION),
            )
        except (KeyError, TypeError) as e:
            raise DatasetFormatError(f"Incomplete results record: missing {e}")

    def save(self, path: str) -> None:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as file:
            yaml.dump(self.to_dict(), file, sort_keys=False)
        logger.info(f"Wrote results record {path}")

    @classmethod
    def load(cls, path: str) -> 'ResultsRecord':
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Results file not found: {path}")
        with open(path, 'r', encoding='utf-8') as file:
            try:
                data = yaml.safe_load(file)
            except yaml.YAMLError as e:
                raise DatasetFormatError(f"{path}: {e}")
        if not isinstance(data, dict):
            raise DatasetFormatError(f"{path}: not a results record")
        return cls.from_dict(data)
