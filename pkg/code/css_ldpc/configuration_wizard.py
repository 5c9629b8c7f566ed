# SPDX-FileCopyrightText: Copyright (c) 2024 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Configuration classes that read JSON or YAML files and environment variables.

Config classes are frozen dataclasses loaded through `dataclass-wizard`. Every leaf field can be overridden by an
environment variable named after its camel-case key path under ``CSSLDPC``: the ``maxIter`` field of the ``decoder``
section is ``CSSLDPC_DECODER_MAXITER``. Environment values win over file values.
"""
import json
import logging
import os
from dataclasses import MISSING, Field, dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, TextIO, Tuple

import yaml
from dataclass_wizard import JSONWizard, LoadMeta, YAMLWizard, errors, fromdict, json_field
from dataclass_wizard.models import JSONField
from dataclass_wizard.utils.string_conv import to_camel_case

configclass = dataclass(frozen=True)
ENV_BASE = "CSSLDPC"
_LOGGER = logging.getLogger(__name__)
_BOLD = "\033[1m"
_END = "\033[0m"


def configfield(name: str, *, env: bool = True, help_txt: str = "", **kwargs: Any) -> JSONField:
    """Create a dataclass field stored under the camel-case key ``name``.

    :param name: The key of the field in configuration files.
    :type name: str
    :param env: Whether an environment variable may override the field.
    :type env: bool
    :param help_txt: The description printed by :meth:`ConfigWizard.print_help`.
    :type help_txt: str
    :returns: The field.
    :rtype: JSONField
    :raises TypeError: If ``name`` is not a string.
    """
    if not isinstance(name, str):
        raise TypeError("Provided name must be a string.")
    meta = dict(kwargs.pop("metadata", {}))
    meta["env"] = env
    meta["help"] = help_txt
    return json_field(to_camel_case(name), metadata=meta, **kwargs)


def _default_of(val: Field) -> Any:
    if val.default_factory is not MISSING:  # type: ignore[misc]
        return val.default_factory()  # type: ignore[misc]
    if val.default is MISSING:
        return "NO-DEFAULT-VALUE"
    return val.default


class ConfigWizard(JSONWizard, YAMLWizard):  # type: ignore[misc] # dataclass-wizard doesn't provide stubs
    """Base class of configuration sections."""

    @classmethod
    def _walk(
        cls, env_parent: str = "", json_parent: Tuple[str, ...] = ()
    ) -> Iterator[Tuple[Field, str, Tuple[str, ...], bool]]:
        """Yield ``(field, env name, key path, is section)`` depth first, sections before their members."""
        for val in cls.__dataclass_fields__.values():  # pylint: disable=no-member; added by dataclass
            jsonname = val.json.keys[0]
            env_name = f"{env_parent}_{jsonname.upper()}"
            path = json_parent + (jsonname,)
            is_section = hasattr(val.type, "envvars")
            yield val, f"{ENV_BASE}{env_name}", path, is_section
            if is_section:
                yield from val.type._walk(env_name, path)  # pylint: disable=protected-access

    @classmethod
    def print_help(cls, help_printer: Callable[[str], Any]) -> None:
        """Write the configuration file format, defaults and environment variables with ``help_printer``."""
        help_printer("---\n")
        for val, env_name, path, is_section in cls._walk():
            indent = " " * (2 * (len(path) - 1))
            help_printer(f"{_BOLD}{indent}{path[-1]}:{_END} {'' if is_section else _default_of(val)}\n")
            if is_section:
                indent += "  "
            if val.metadata.get("help"):
                help_printer(f"{indent}# {val.metadata['help']}\n")
            if not is_section:
                typestr = getattr(val.type, "__name__", None) or str(val.type).replace("typing.", "")
                help_printer(f"{indent}# Type: {typestr}\n")
                if val.metadata.get("env", True):
                    help_printer(f"{indent}# ENV Variable: {env_name}\n")
            help_printer("\n")

    @classmethod
    def envvars(cls) -> List[Tuple[str, Tuple[str, ...], type]]:
        """List ``(variable, key path, type)`` for every field an environment variable may set."""
        return [
            (env_name, path, val.type)
            for val, env_name, path, is_section in cls._walk()
            if not is_section and val.metadata.get("env", True)
        ]

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "ConfigWizard":
        """Build the configuration from parsed file contents plus environment overrides.

        :raises RuntimeError: If ``data`` is not a mapping.
        """
        if data and not isinstance(data, dict):
            raise RuntimeError("Configuration data is not a dictionary.")
        data = dict(data or {})
        for var_name, conf_path, var_type in cls.envvars():
            raw = os.environ.get(var_name)
            if raw:
                value = try_json_load(raw)
                update_dict(data, conf_path, value, overwrite=True)
                _LOGGER.debug("config override from %s (%s) = %r", var_name, var_type, value)
        LoadMeta(key_transform="CAMEL").bind_to(cls)
        return fromdict(cls, data)  # type: ignore[no-any-return] # dataclass-wizard doesn't provide stubs

    @classmethod
    def from_file(cls, filepath: str) -> Optional["ConfigWizard"]:
        """Load a JSON or YAML file; an empty file gives the defaults.

        :returns: The configuration, or None after logging the problem.
        :rtype: Optional[ConfigWizard]
        """
        try:
            with open(filepath, encoding="utf-8") as stream:
                data = read_json_or_yaml(stream)
        except FileNotFoundError:
            _LOGGER.error("The configuration file %s cannot be found.", filepath)
            return None
        except PermissionError:
            _LOGGER.error("Permission denied when reading the configuration file %s.", filepath)
            return None
        except ValueError as err:
            _LOGGER.error("Configuration file must be valid JSON or YAML:\n%s", err)
            return None
        try:
            return cls.from_dict(data)
        except errors.MissingFields as err:
            _LOGGER.error("Configuration is missing required fields:\n%s", err)
        except errors.ParseError as err:
            _LOGGER.error("Invalid configuration value provided:\n%s", err)
        return None


def read_json_or_yaml(stream: TextIO) -> Dict[str, Any]:
    """Parse a stream as JSON, falling back to YAML.

    :raises ValueError: If neither parser accepts the contents or they are not a mapping.
    """
    text = stream.read()
    if not text.strip():
        return {}
    try:
        data = json.loads(text)
    except ValueError as json_err:
        try:
            data = yaml.safe_load(text)
        except yaml.error.YAMLError as yaml_err:
            raise ValueError(f"JSON Parser Errors:\n{json_err}\n\nYAML Parser Errors:\n{yaml_err}") from yaml_err
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"expected a mapping at the top level, got {type(data).__name__}")
    return data


def try_json_load(value: str) -> Any:
    """Parse ``value`` as JSON, or return it unchanged."""
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def update_dict(data: Dict[str, Any], path: Tuple[str, ...], value: Any, overwrite: bool = False) -> None:
    """Set ``value`` at the key path, creating intermediate sections.

    Without ``overwrite`` an existing truthy value is kept. A path running through a non-mapping is left alone.
    """
    target = data
    for key in path[:-1]:
        if not target.get(key):
            target[key] = {}
        if not isinstance(target[key], dict):
            return
        target = target[key]
    if overwrite or not target.get(path[-1]):
        target[path[-1]] = value
