# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import DegenerateDataError, InvalidArgumentError
from qnn.reupload.management.logger_module import logger

from typing import Any, Dict

import numpy as np


ORTHONORMAL_TOL = 1e-8
_RANK_TOL = 1e-12


def _features_of(rows) -> np.ndarray:
    features = getattr(rows, 'features', rows)
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise InvalidArgumentError(f"Rows must form a 2-D matrix, got shape {features.shape}")
    if not np.all(np.isfinite(features)):
        raise InvalidArgumentError("Rows contain non-finite values")
    return features


class PcaModel:
    """
    A principal-component projection followed by per-dimension min-max scaling to [-1, 1].

    :param mean: Column means of the fit data, shape (d_in,).
    :type mean: array-like
    :param components: Orthonormal columns, shape (d_in, out_dim), ordered by decreasing variance.
    :type components: array-like
    :param explained_variance: Variance along each component.
    :type explained_variance: array-like
    :param explained_variance_ratio: Share of the total variance along each component.
    :type explained_variance_ratio: array-like
    :param scale_min: Per-dimension minimum of the projected fit data.
    :type scale_min: array-like
    :param scale_max: Per-dimension maximum of the projected fit data.
    :type scale_max: array-like
    """
    def __init__(self, mean, components, explained_variance, explained_variance_ratio, scale_min, scale_max) -> None:
        self._mean = np.array(mean, dtype=np.float64).reshape(-1)
        self._components = np.array(components, dtype=np.float64)
        self._explained_variance = np.array(explained_variance, dtype=np.float64).reshape(-1)
        self._explained_variance_ratio = np.array(explained_variance_ratio, dtype=np.float64).reshape(-1)
        self._scale_min = np.array(scale_min, dtype=np.float64).reshape(-1)
        self._scale_max = np.array(scale_max, dtype=np.float64).reshape(-1)

        d_in = self._mean.shape[0]
        if self._components.ndim != 2 or self._components.shape[0] != d_in:
            raise InvalidArgumentError(f"Components must have shape ({d_in}, k), got {self._components.shape}")
        k = self._components.shape[1]
        for name, values in (('explained_variance', self._explained_variance),
                             ('explained_variance_ratio', self._explained_variance_ratio),
                             ('scale_min', self._scale_min), ('scale_max', self._scale_max)):
            if values.shape != (k,):
                raise InvalidArgumentError(f"{name} must have {k} entries, got {values.shape[0]}")
        gram = self._components.T @ self._components
        if not np.allclose(gram, np.eye(k), atol=ORTHONORMAL_TOL, rtol=0.0):
            raise InvalidArgumentError("Components are not orthonormal")
        if np.any(self._scale_max <= self._scale_min):
            raise DegenerateDataError("Projected data has zero range along a component")
        for array in (self._mean, self._components, self._explained_variance,
                      self._explained_variance_ratio, self._scale_min, self._scale_max):
            array.setflags(write=False)

    @property
    def mean(self) -> np.ndarray:
        return self._mean

    @property
    def components(self) -> np.ndarray:
        return self._components

    @property
    def explained_variance(self) -> np.ndarray:
        return self._explained_variance

    @property
    def explained_variance_ratio(self) -> np.ndarray:
        return self._explained_variance_ratio

    @property
    def scale_min(self) -> np.ndarray:
        return self._scale_min

    @property
    def scale_max(self) -> np.ndarray:
        return self._scale_max

    @property
    def input_dim(self) -> int:
        return int(self._mean.shape[0])

    @property
    def out_dim(self) -> int:
        return int(self._components.shape[1])

    def project(self, rows) -> np.ndarray:
        features = _features_of(rows)
        if features.shape[1] != self.input_dim:
            raise InvalidArgumentError(f"Rows have {features.shape[1]} columns, the model expects {self.input_dim}")
        return (features - self._mean) @ self._components

    def scale(self, projected) -> np.ndarray:
        projected = np.asarray(projected, dtype=np.float64)
        return 2.0 * (projected - self._scale_min) / (self._scale_max - self._scale_min) - 1.0

    def unscale(self, scaled) -> np.ndarray:
        scaled = np.asarray(scaled, dtype=np.float64)
        return (scaled + 1.0) / 2.0 * (self._scale_max - self._scale_min) + self._scale_min

    def reconstruct(self, projected) -> np.ndarray:
        """
        Maps projected coordinates back into the input space.

        :param projected: Unscaled coordinates of shape (M, out_dim).
        :type projected: array-like

        :return: Points of shape (M, input_dim) in the span of the components.
        :rtype: numpy.ndarray
        """
        return np.asarray(projected, dtype=np.float64) @ self._components.T + self._mean

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean': self._mean.tolist(),
            'components': self._components.tolist(),
            'explained_variance': self._explained_variance.tolist(),
            'explained_variance_ratio': self._explained_variance_ratio.tolist(),
            'scale_min': self._scale_min.tolist(),
            'scale_max': self._scale_max.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PcaModel':
        try:
            return cls(data['mean'], data['components'], data['explained_variance'],
                       data['explained_variance_ratio'], data['scale_min'], data['scale_max'])
        except KeyError as e:
            raise InvalidArgumentError(f"PCA model is missing {e}")


def fit_pca(rows, out_dim: int = 2) -> PcaModel:
    """
    Fits the top principal components of the row covariance and the min-max scaling of the projection.

    Each component is signed so that its largest-magnitude entry is positive.

    :param rows: A feature matrix, or any object with a features matrix.
    :type rows: array-like or LabeledDataset or FraudRecords
    :param out_dim: Number of components to keep.
    :type out_dim: int

    :return: The fitted model.
    :rtype: PcaModel

    :raises DegenerateDataError: If the data has fewer than out_dim directions of non-zero variance.
    """
    features = _features_of(rows)
    m, d_in = features.shape
    if m < 2:
        raise InvalidArgumentError(f"PCA needs at least 2 rows, got {m}")
    if isinstance(out_dim, bool) or int(out_dim) != out_dim or not 1 <= out_dim <= d_in:
        raise InvalidArgumentError(f"out_dim must be in [1, {d_in}], got {out_dim}")

    mean = features.mean(axis=0)
    covariance = np.atleast_2d(np.cov(features, rowvar=False))
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order]

    total = float(np.sum(eigenvalues))
    if total <= 0.0 or eigenvalues[out_dim - 1] <= _RANK_TOL * eigenvalues[0]:
        raise DegenerateDataError(
            f"Data has fewer than {out_dim} directions of non-zero variance (eigenvalues {eigenvalues[:out_dim].tolist()})"
        )

    components = eigenvectors[:, :out_dim].copy()
    for j in range(out_dim):
        if components[np.argmax(np.abs(components[:, j])), j] < 0:
            components[:, j] = -components[:, j]

    projected = (features - mean) @ components
    model = PcaModel(mean, components, eigenvalues[:out_dim], eigenvalues[:out_dim] / total,
                     projected.min(axis=0), projected.max(axis=0))
    logger.info(f"Fitted PCA {d_in} -> {out_dim} on {m} rows, explained variance ratio "
                f"{float(np.sum(model.explained_variance_ratio)):.4f}")
    return model


def apply_pca(model: PcaModel, rows) -> LabeledDataset:
    """
    Projects labeled rows and scales them to [-1, 1]; values outside the fitted range are clipped.

    :param model: The fitted model.
    :type model: PcaModel
    :param rows: Labeled rows.
    :type rows: LabeledDataset or FraudRecords

    :return: The projected dataset.
    :rtype: LabeledDataset
    """
    labels = getattr(rows, 'labels', None)
    if labels is None:
        raise InvalidArgumentError("apply_pca needs labeled rows")
    scaled = np.clip(model.scale(model.project(rows)), -1.0, 1.0)
    if isinstance(rows, LabeledDataset):
        meta = rows.meta
    else:
        meta = {'source': 'fraud-csv', 'path': getattr(rows, 'path', None)}
    meta.setdefault('transforms', [])
    meta['transforms'].append(f"pca(raw-covariance, {model.input_dim}->{model.out_dim}), minmax[-1,1]")
    return LabeledDataset(scaled, labels, meta)
