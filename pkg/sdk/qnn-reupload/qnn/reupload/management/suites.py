# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.classical.mlp import MlpSpec, mlp_param_count
from qnn.reupload.management.exceptions import InvalidArgumentError, StructureMismatchError
from qnn.reupload.management.experiment_config import ExperimentConfig
from qnn.reupload.quantum.ansatz import AnsatzSpec, LayerKind, PrepKind, circuit_depth, param_count

from typing import Any, Dict, List, Optional, Tuple


_LAYER_LABELS = {
    LayerKind.UNITARY: 'Unitary',
    LayerKind.COMPRESSED_UNITARY: 'Compressed Unitary',
    LayerKind.UAT: 'UAT',
}
_PREP_LABELS = {PrepKind.NONE: 'None', PrepKind.HADAMARD: 'H', PrepKind.TRAINABLE_U: 'U'}

CIRCLE_DATASET = {'kind': 'circle', 'train_size': 200, 'test_size': 2000, 'radius': 1.0}
CIRCLE_TRAINING = {'optimizer': 'lbfgs', 'max_iterations': 50}
FRAUD_TRAINING = {'optimizer': 'lbfgs', 'max_iterations': 50}
MLP_EPOCHS = 150


class SuiteRow:
    """
    One model configuration of a benchmark suite with its reference depth and parameter count.

    :param model: The circuit or network description.
    :type model: Union[AnsatzSpec, MlpSpec]
    :param expected_params: Reference parameter count.
    :type expected_params: int
    :param expected_depth: Reference circuit depth, None for networks.
    :type expected_depth: Optional[int]
    :param label: Layer-type label for tables; derived from the model when omitted.
    :type label: Optional[str]
    """
    def __init__(self, model, expected_params: int, expected_depth: Optional[int] = None, label: Optional[str] = None) -> None:
        if not isinstance(model, (AnsatzSpec, MlpSpec)):
            raise InvalidArgumentError(f"Unsupported suite model {type(model).__name__}")
        self._model = model
        self._expected_params = expected_params
        self._expected_depth = expected_depth
        self._label = label

    @property
    def model(self):
        return self._model

    @property
    def is_network(self) -> bool:
        return isinstance(self._model, MlpSpec)

    @property
    def layer_type(self) -> str:
        if self._label:
            return self._label
        if self.is_network:
            return f"Classical h={self._model.hidden_units}"
        return _LAYER_LABELS[self._model.layer_kind]

    @property
    def initial_prep(self) -> str:
        return 'None' if self.is_network else _PREP_LABELS[self._model.prep]

    @property
    def n_layers(self) -> int:
        # a network has one hidden and one output layer
        return 2 if self.is_network else self._model.n_layers

    @property
    def depth(self) -> Optional[int]:
        return None if self.is_network else circuit_depth(self._model)

    @property
    def params(self) -> int:
        return mlp_param_count(self._model) if self.is_network else param_count(self._model)

    @property
    def expected_params(self) -> int:
        return self._expected_params

    @property
    def expected_depth(self) -> Optional[int]:
        return self._expected_depth

    def check_structure(self) -> None:
        """
        Compares the computed parameter count and depth against the reference values.

        :raises StructureMismatchError: On any difference.
        """
        if self.params != self._expected_params:
            raise StructureMismatchError(
                f"{self.layer_type}/{self.initial_prep}/{self.n_layers}: {self.params} params, expected {self._expected_params}"
            )
        if self._expected_depth is not None and self.depth != self._expected_depth:
            raise StructureMismatchError(
                f"{self.layer_type}/{self.initial_prep}/{self.n_layers}: depth {self.depth}, expected {self._expected_depth}"
            )

    def model_section(self) -> Dict[str, Any]:
        if self.is_network:
            return {'mlp': {'hidden_units': self._model.hidden_units, 'epochs': MLP_EPOCHS}}
        return {'ansatz': self._model.to_dict()}


class BenchmarkSuite:
    """
    A named list of model configurations trained and scored on a shared dataset protocol.

    :param name: The suite name.
    :type name: str
    :param rows: The model configurations, in table order.
    :type rows: List[SuiteRow]
    :param dataset_kind: 'circle' or 'fraud'.
    :type dataset_kind: str
    :param training: Training section shared by the circuit rows.
    :type training: Dict[str, Any]
    :param confusion_columns: Report tp, tn, fp and fn columns.
    :type confusion_columns: bool
    :param description: One-line summary.
    :type description: str
    """
    def __init__(
            self,
            name: str,
            rows: List[SuiteRow],
            dataset_kind: str,
            training: Dict[str, Any],
            confusion_columns: bool = False,
            description: str = ''
    ) -> None:
        self._name = name
        self._rows = list(rows)
        self._dataset_kind = dataset_kind
        self._training = dict(training)
        self._confusion_columns = confusion_columns
        self._description = description

    @property
    def name(self) -> str:
        return self._name

    @property
    def rows(self) -> List[SuiteRow]:
        return list(self._rows)

    @property
    def dataset_kind(self) -> str:
        return self._dataset_kind

    @property
    def confusion_columns(self) -> bool:
        return self._confusion_columns

    @property
    def description(self) -> str:
        return self._description

    def check_structure(self) -> None:
        for row in self._rows:
            row.check_structure()

    def dataset_section(self, csv_path: Optional[str] = None) -> Dict[str, Any]:
        if self._dataset_kind == 'circle':
            return dict(CIRCLE_DATASET)
        if not csv_path:
            raise InvalidArgumentError(f"Suite '{self._name}' needs the transaction CSV (--csv)")
        return {'kind': 'fraud', 'train_size': 400, 'test_size': 400, 'csv_path': csv_path}

    def experiment_config(
            self,
            row_index: int,
            seed: int,
            csv_path: Optional[str] = None,
            output_dir: str = 'results'
    ) -> ExperimentConfig:
        """
        The experiment configuration of one suite row and seed.

        :param row_index: Index into rows.
        :type row_index: int
        :param seed: The experiment seed.
        :type seed: int
        :param csv_path: The transaction CSV for fraud suites.
        :type csv_path: Optional[str]
        :param output_dir: The output folder.
        :type output_dir: str

        :return: The configuration.
        :rtype: ExperimentConfig
        """
        row = self._rows[row_index]
        return ExperimentConfig({
            'name': f"{self._name}_row{row_index + 1}",
            'seed': seed,
            'dataset': self.dataset_section(csv_path),
            'model': row.model_section(),
            'training': dict(self._training),
            'output': {'directory': output_dir},
        })


def _uat(n_layers: int, prep: PrepKind, depth: int, params: int) -> SuiteRow:
    return SuiteRow(AnsatzSpec(LayerKind.UAT, n_layers, prep), params, depth)


def _build_suites() -> Dict[str, BenchmarkSuite]:
    suites = [
        BenchmarkSuite('exp1', [
            SuiteRow(AnsatzSpec(LayerKind.UNITARY, 3), 9, 6),
            SuiteRow(AnsatzSpec(LayerKind.COMPRESSED_UNITARY, 3), 18, 3),
            SuiteRow(AnsatzSpec(LayerKind.UAT, 3), 15, 6),
        ], 'circle', CIRCLE_TRAINING, description='layer formulations at 3 layers on the circle data'),
        BenchmarkSuite('exp2', [
            _uat(3, PrepKind.NONE, 6, 15),
            _uat(3, PrepKind.HADAMARD, 7, 15),
            _uat(3, PrepKind.TRAINABLE_U, 7, 18),
        ], 'circle', CIRCLE_TRAINING, description='UAT preparation step on the circle data'),
        BenchmarkSuite('exp3', [
            _uat(1, PrepKind.TRAINABLE_U, 3, 8),
            _uat(2, PrepKind.TRAINABLE_U, 5, 13),
            _uat(3, PrepKind.TRAINABLE_U, 7, 18),
            _uat(4, PrepKind.TRAINABLE_U, 9, 23),
            _uat(5, PrepKind.TRAINABLE_U, 11, 28),
        ], 'circle', CIRCLE_TRAINING, description='UAT+U layer count sweep on the circle data'),
        BenchmarkSuite('exp3b', [
            _uat(4, PrepKind.TRAINABLE_U, 9, 23),
            _uat(4, PrepKind.NONE, 8, 20),
        ], 'circle', CIRCLE_TRAINING, description='UAT preparation step at 4 layers on the circle data'),
        BenchmarkSuite('fraud-layers', [
            _uat(1, PrepKind.TRAINABLE_U, 3, 8),
            _uat(2, PrepKind.TRAINABLE_U, 5, 13),
            _uat(4, PrepKind.TRAINABLE_U, 9, 23),
        ], 'fraud', FRAUD_TRAINING, confusion_columns=True,
            description='UAT+U layer count on the transaction data'),
        BenchmarkSuite('fraud', [
            _uat(1, PrepKind.TRAINABLE_U, 3, 8),
            _uat(2, PrepKind.TRAINABLE_U, 5, 13),
            _uat(4, PrepKind.TRAINABLE_U, 9, 23),
            _uat(2, PrepKind.NONE, 4, 10),
            _uat(3, PrepKind.NONE, 6, 15),
            SuiteRow(AnsatzSpec(LayerKind.UNITARY, 3), 9, 6),
            SuiteRow(MlpSpec(3), 13, label='Classical 1'),
            SuiteRow(MlpSpec(5), 21, label='Classical 2'),
        ], 'fraud', FRAUD_TRAINING, confusion_columns=True,
            description='circuits against classical networks on the transaction data'),
    ]
    return {suite.name: suite for suite in suites}


SUITES: Dict[str, BenchmarkSuite] = _build_suites()


def suite_names() -> Tuple[str, ...]:
    return tuple(SUITES)


def get_suite(name: str) -> BenchmarkSuite:
    """
    Looks up a suite and checks its rows against the reference structure.

    :param name: The suite name.
    :type name: str

    :return: The suite.
    :rtype: BenchmarkSuite

    :raises InvalidArgumentError: If no suite has that name.
    :raises StructureMismatchError: If a row's parameter count or depth is off.
    """
    if name not in SUITES:
        raise InvalidArgumentError(f"Unknown suite '{name}', choose from {', '.join(SUITES)}")
    suite = SUITES[name]
    suite.check_structure()
    return suite
