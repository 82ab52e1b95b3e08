# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.exceptions import ConfigError
from qnn.reupload.management.experiment_config import ExperimentConfig
from qnn.reupload.management.logger_module import logger

import os
from typing import Dict, List, Optional

import yaml


CONFIG_SUFFIXES = ('_experiment_config.yaml', '_experiment_config.yml')


class ExperimentConfigManager:
    _instance = None

    """
    A class to manage loading, updating, saving and deleting experiment configurations in a local folder.

    :param config_folder: The folder holding '<name>_experiment_config.yaml' files. Optional, defaults to
        a config folder in the user's home directory.
    :type config_folder: str
    """
    def __init__(
            self,
            config_folder: Optional[str] = None
    ) -> None:
        self._config_folder = config_folder or self._default_config_path()
        self._configs: Dict[str, ExperimentConfig] = {}
        self.load_configs()

    @staticmethod
    def _default_config_path() -> str:
        home = os.path.expanduser("~")
        return os.path.join(home, ".config", 'qnn-reupload')

    @classmethod
    def get_instance(
        cls,
        config_folder: Optional[str] = None
    ) -> 'ExperimentConfigManager':
        """
        Gets the singleton instance of the ExperimentConfigManager object.

        :param config_folder: The folder holding configuration files.
        :type config_folder: str

        :return: The singleton instance.
        :rtype: ExperimentConfigManager
        """
        if cls._instance is None:
            cls._instance = cls(config_folder)
        return cls._instance

    @property
    def config_folder(self) -> str:
        return self._config_folder

    def load_configs(self) -> None:
        """
        Loads every experiment configuration file in the config folder. Invalid files are skipped with a warning.
        """
        try:
            filenames = sorted(os.listdir(self._config_folder))
        except FileNotFoundError:
            logger.warning(f"No experiment configurations found in the folder '{self._config_folder}'")
            return

        for filename in filenames:
            if not filename.endswith(CONFIG_SUFFIXES):
                continue
            path = os.path.join(self._config_folder, filename)
            try:
                config = ExperimentConfig.from_file(path)
            except ConfigError as e:
                logger.warning(f"Invalid experiment configuration file '{path}': {e}")
                continue
            if config.name in self._configs:
                logger.warning(f"Duplicate experiment configuration '{config.name}' in '{path}' ignored")
                continue
            self._configs[config.name] = config
            logger.info(f"Loaded experiment configuration '{config.name}'")

    def get_config(self, name: str) -> Optional[ExperimentConfig]:
        """
        Gets a configuration by name.

        :param name: The configuration name.
        :type name: str

        :return: The configuration, or None if it does not exist.
        :rtype: Optional[ExperimentConfig]
        """
        if name not in self._configs:
            logger.warning(f"No configuration found for '{name}'")
            return None
        return self._configs[name]

    def get_all_config_names(self) -> List[str]:
        return list(self._configs)

    def update_config(self, name: str, config_yaml: str) -> str:
        """
        Replaces or adds a configuration in memory from YAML text.

        :param name: The configuration name.
        :type name: str
        :param config_yaml: The configuration as YAML.
        :type config_yaml: str

        :return: The name of the updated configuration.
        :rtype: str
        """
        logger.info(f"Updating experiment configuration '{name}'")
        config = ExperimentConfig.from_yaml(config_yaml)
        if config.name != name:
            data = config.to_dict()
            data['name'] = name
            config = ExperimentConfig(data)
        self._configs[name] = config
        return name

    def save_config(self, name: str, folder_path: Optional[str] = None) -> str:
        """
        Saves a configuration as '<name>_experiment_config.yaml'.

        :param name: The configuration name.
        :type name: str
        :param folder_path: Target folder. Optional, defaults to the config folder.
        :type folder_path: str

        :return: The path of the written file.
        :rtype: str
        """
        if name not in self._configs:
            raise ConfigError(f"No configuration found for '{name}'")
        folder_path = folder_path or self._config_folder
        os.makedirs(folder_path, exist_ok=True)
        config_path = os.path.join(folder_path, f"{name}{CONFIG_SUFFIXES[0]}")
        try:
            with open(config_path, 'w', encoding='utf-8') as file:
                yaml.dump(self._configs[name].to_dict(), file, sort_keys=False)
        except OSError as e:
            logger.error(f"Error saving configuration file at '{config_path}': {e}")
            raise ConfigError(f"Error saving configuration file: {e}")
        logger.info(f"Configuration for '{name}' saved at '{config_path}'")
        return config_path

    def save_configs(self, folder_path: Optional[str] = None) -> None:
        for name in self._configs:
            self.save_config(name, folder_path)

    def delete_config(self, name: str) -> bool:
        """
        Deletes a configuration from memory and its file from the config folder.

        :param name: The configuration name.
        :type name: str

        :return: True if a file was deleted.
        :rtype: bool
        """
        if name not in self._configs:
            logger.warning(f"No configuration found for '{name}'")
            return False
        del self._configs[name]
        deleted = False
        for suffix in CONFIG_SUFFIXES:
            path = os.path.join(self._config_folder, f"{name}{suffix}")
            if os.path.exists(path):
                os.remove(path)
                deleted = True
                logger.info(f"Deleted configuration file: {path}")
        return deleted

    @property
    def configs(self) -> Dict[str, ExperimentConfig]:
        return dict(self._configs)
