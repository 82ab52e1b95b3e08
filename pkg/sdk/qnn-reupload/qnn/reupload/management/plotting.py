# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.data.labeled_dataset import LabeledDataset
from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.management.logger_module import logger
from qnn.reupload.management.trained_model import TrainedModel

import os
from typing import Dict, Optional, Sequence, Tuple

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap
import numpy as np


GRID_SIZE = 200
CLASS_COLORS = ('tab:blue', 'tab:green')
REGION_COLORS = ('#cfe2f3', '#d9ead3')
MISCLASSIFIED_COLOR = 'tab:red'

# fixed ids and no timestamp so identical plots produce identical files
matplotlib.rcParams['svg.hashsalt'] = 'qnn-reupload'
_SVG_METADATA = {'Date': None}


def plot_bounds(data: LabeledDataset, margin: float = 0.05) -> Tuple[float, float, float, float]:
    """
    A square view containing [-1, 1]^2 and every data point.

    :return: (x_min, x_max, y_min, y_max).
    :rtype: Tuple[float, float, float, float]
    """
    low = min(-1.0, float(data.features.min())) if len(data) else -1.0
    high = max(1.0, float(data.features.max())) if len(data) else 1.0
    return low - margin, high + margin, low - margin, high + margin


def decision_grid(
        model: TrainedModel,
        bounds: Tuple[float, float, float, float],
        grid_size: int = GRID_SIZE
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Predicts the class at every point of a regular grid.

    :param model: The trained model.
    :type model: TrainedModel
    :param bounds: (x_min, x_max, y_min, y_max).
    :type bounds: Tuple[float, float, float, float]
    :param grid_size: Points per axis.
    :type grid_size: int

    :return: Grid x coordinates, grid y coordinates and predicted labels, each of shape (grid_size, grid_size).
    :rtype: Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]
    """
    if model.input_dim != 2:
        raise InvalidArgumentError(f"Decision grids need a 2-D model, got input dimension {model.input_dim}")
    xs = np.linspace(bounds[0], bounds[1], grid_size)
    ys = np.linspace(bounds[2], bounds[3], grid_size)
    XX, YY = np.meshgrid(xs, ys)
    points = np.column_stack([XX.ravel(), YY.ravel()])
    return XX, YY, model.predict(points).reshape(XX.shape)


def plot_decision(
        path: str,
        data: LabeledDataset,
        model: Optional[TrainedModel] = None,
        title: Optional[str] = None,
        grid_size: int = GRID_SIZE
) -> int:
    """
    Draws the data colored by true class as an SVG file. With a model, the predicted class regions
    are shaded and misclassified points are circled.

    :param path: The output file.
    :type path: str
    :param data: A 2-D labeled dataset.
    :type data: LabeledDataset
    :param model: Optional trained model.
    :type model: Optional[TrainedModel]
    :param title: Optional plot title.
    :type title: Optional[str]
    :param grid_size: Grid points per axis for the shading.
    :type grid_size: int

    :return: Number of misclassified points (0 without a model).
    :rtype: int
    """
    if data.dim != 2:
        raise InvalidArgumentError(f"Only 2-D data can be plotted, got dimension {data.dim}")
    bounds = plot_bounds(data)
    fig, ax = plt.subplots(figsize=(6, 6))
    misclassified = np.zeros(len(data), dtype=bool)
    try:
        if model is not None:
            XX, YY, ZZ = decision_grid(model, bounds, grid_size)
            ax.contourf(XX, YY, ZZ, levels=[-0.5, 0.5, 1.5], cmap=ListedColormap(REGION_COLORS))
            misclassified = model.predict(data.features) != data.labels

        for label, name in ((0, 'class 0'), (1, 'class 1')):
            points = data.features[data.labels == label]
            ax.scatter(points[:, 0], points[:, 1], s=12, color=CLASS_COLORS[label], label=name)
        if np.any(misclassified):
            wrong = data.features[misclassified]
            ax.scatter(wrong[:, 0], wrong[:, 1], s=80, linewidth=1, facecolors='none',
                       edgecolors=MISCLASSIFIED_COLOR, label='misclassified')

        ax.set_xlim(bounds[0], bounds[1])
        ax.set_ylim(bounds[2], bounds[3])
        ax.set_aspect('equal')
        ax.set_xlabel('x1')
        ax.set_ylabel('x2')
        if title:
            ax.set_title(title)
        ax.legend(loc='upper right', fontsize='small')
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        fig.savefig(path, format='svg', bbox_inches='tight', metadata=_SVG_METADATA)
    finally:
        plt.close(fig)
    count = int(np.sum(misclassified))
    logger.info(f"Wrote plot {path} ({len(data)} points, {count} misclassified)")
    return count


def plot_loss_history(path: str, histories: Dict[str, Sequence[float]], title: Optional[str] = None) -> None:
    """
    Draws one training curve per entry as an SVG file.

    :param path: The output file.
    :type path: str
    :param histories: Loss values by curve name.
    :type histories: Dict[str, Sequence[float]]
    :param title: Optional plot title.
    :type title: Optional[str]
    """
    if not histories:
        raise InvalidArgumentError("No loss histories to plot")
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        for name, history in histories.items():
            ax.plot(range(len(history)), list(history), label=name)
        ax.set_xlabel('iteration')
        ax.set_ylabel('loss')
        if title:
            ax.set_title(title)
        ax.legend(fontsize='small')
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        fig.savefig(path, format='svg', bbox_inches='tight', metadata=_SVG_METADATA)
    finally:
        plt.close(fig)
    logger.info(f"Wrote loss plot {path}")
