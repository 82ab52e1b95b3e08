# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.classical.mlp import MlpParams, MlpSpec, mlp_param_count, mlp_predict
from qnn.reupload.management.exceptions import DatasetFormatError, InvalidArgumentError
from qnn.reupload.quantum.ansatz import AnsatzSpec, ParamVector, circuit_depth, describe, param_count
from qnn.reupload.quantum.training import ClassifierConfig, predict_batch

import os
from typing import Any, Dict, Optional, Union

import numpy as np
import yaml


class TrainedModel:
    """
    A trained classifier of either family together with its decision rule.

    :param spec: The circuit or network description.
    :type spec: Union[AnsatzSpec, MlpSpec]
    :param params: The trained parameters.
    :type params: Union[ParamVector, MlpParams]
    :param classifier: The decision rule of circuit models.
    :type classifier: Optional[ClassifierConfig]
    """
    def __init__(
            self,
            spec: Union[AnsatzSpec, MlpSpec],
            params: Union[ParamVector, MlpParams],
            classifier: Optional[ClassifierConfig] = None
    ) -> None:
        if isinstance(spec, AnsatzSpec):
            params = ParamVector(params.values if isinstance(params, ParamVector) else params, spec)
        elif isinstance(spec, MlpSpec):
            if not isinstance(params, MlpParams):
                raise InvalidArgumentError("Network models need MlpParams")
            if params.flatten().size != mlp_param_count(spec):
                raise InvalidArgumentError("Network parameters do not match the network description")
        else:
            raise InvalidArgumentError(f"Unsupported model description {type(spec).__name__}")
        self._spec = spec
        self._params = params
        self._classifier = classifier or ClassifierConfig()

    @property
    def spec(self) -> Union[AnsatzSpec, MlpSpec]:
        return self._spec

    @property
    def params(self) -> Union[ParamVector, MlpParams]:
        return self._params

    @property
    def classifier(self) -> ClassifierConfig:
        return self._classifier

    @property
    def family(self) -> str:
        return 'ansatz' if isinstance(self._spec, AnsatzSpec) else 'mlp'

    @property
    def input_dim(self) -> int:
        return self._spec.input_dim

    @property
    def param_count(self) -> int:
        if self.family == 'ansatz':
            return param_count(self._spec)
        return mlp_param_count(self._spec)

    @property
    def depth(self) -> Optional[int]:
        """
        Circuit depth, or None for a classical network.
        """
        return circuit_depth(self._spec) if self.family == 'ansatz' else None

    def predict(self, X) -> np.ndarray:
        """
        Predicts labels for every input row.

        :param X: Inputs of shape (M, input_dim).
        :type X: array-like

        :return: Labels of shape (M,).
        :rtype: numpy.ndarray
        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise InvalidArgumentError(
                f"Model expects {self.input_dim} features, got data of shape {X.shape}"
            )
        if self.family == 'ansatz':
            return predict_batch(self._spec, self._params, X, self._classifier)
        return mlp_predict(self._spec, self._params, X)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'family': self.family, 'spec': self._spec.to_dict(), 'param_count': self.param_count}
        if self.family == 'ansatz':
            data['depth'] = self.depth
            data['circuit'] = describe(self._spec)
            data['classifier'] = self._classifier.to_dict()
            data['params'] = self._params.tolist()
        else:
            data['params'] = self._params.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainedModel':
        """
        Rebuilds a model from to_dict output.

        :param data: The dictionary.
        :type data: Dict[str, Any]

        :return: The model.
        :rtype: TrainedModel
        """
        try:
            family = data['family']
            if family == 'ansatz':
                spec = AnsatzSpec.from_dict(data['spec'])
                return cls(spec, ParamVector(data['params'], spec), ClassifierConfig.from_dict(data.get('classifier')))
            if family == 'mlp':
                return cls(MlpSpec.from_dict(data['spec']), MlpParams.from_dict(data['params']))
        except (KeyError, TypeError) as e:
            raise InvalidArgumentError(f"Invalid model description: {e}")
        raise InvalidArgumentError(f"Unknown model family {data.get('family')!r}")

    def save(self, path: str) -> None:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as file:
            yaml.dump({'model': self.to_dict()}, file, sort_keys=False)

    @classmethod
    def load(cls, path: str) -> 'TrainedModel':
        """
        Loads a model from a model file or from a results file that embeds one.

        :param path: The file path.
        :type path: str

        :return: The model.
        :rtype: TrainedModel
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Model file not found: {path}")
        with open(path, 'r', encoding='utf-8') as file:
            try:
                record = yaml.safe_load(file)
            except yaml.YAMLError as e:
                raise DatasetFormatError(f"{path}: {e}")
        if not isinstance(record, dict) or not isinstance(record.get('model'), dict):
            raise DatasetFormatError(f"{path}: no model section")
        return cls.from_dict(record['model'])
