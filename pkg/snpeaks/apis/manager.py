# Copyright (c) 2026 snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import inspect
from typing import Callable, Dict, Iterable, List, Optional, Union

from snpeaks.utils.logger import logger

__all__ = ['POTENTIALS', 'MODULATIONS', 'CHECKS', 'COMMANDS']


class ComponentManager:
    """Registry of named lab components: potential families, sphere
    modulations, verification checks and CLI commands.

    Classes and functions are registered under their own name
    (`add_component`) or under an explicit dotted key (`register`). Keys keep
    registration order, which is the order `verify` runs its checks in.

    Args:
        name (str): registry name used in messages.
        description (str): free text.

    Examples:
        CHECKS = ComponentManager(name='checks')

        @CHECKS.register('ground_state.energy_ratio')
        def check_energy_ratio(ctx): ...

        CHECKS.keys_with_prefix('ground_state')
        # ['ground_state.energy_ratio']
    """

    def __init__(self, *, name: str, description: str = ''):
        self._components: Dict[str, Callable] = {}
        self._name = name
        self._description = description

    def __len__(self):
        return len(self._components)

    def __repr__(self):
        return '{}{}'.format(self._name or type(self).__name__,
                             list(self._components))

    def __contains__(self, key: str) -> bool:
        return key in self._components

    def __getitem__(self, key: str) -> Callable:
        try:
            return self._components[key]
        except KeyError:
            raise KeyError('No component {!r} in {}'.format(key, self))

    @property
    def components_dict(self) -> Dict[str, Callable]:
        return self._components

    @property
    def name(self) -> str:
        return self._name

    @property
    def description(self) -> str:
        return self._description

    def keys_with_prefix(self, prefix: Optional[str] = None) -> List[str]:
        """Registered keys starting with `prefix`, in registration order."""
        return [k for k in self._components if k.startswith(prefix or '')]

    def _add(self, component: Callable, key: Optional[str] = None):
        if not (inspect.isclass(component) or inspect.isfunction(component)):
            raise TypeError('{} accepts classes and functions, got {}'.format(
                self._name, type(component)))

        key = key or component.__name__
        if key in self._components:
            logger.warning('{}: {} replaces the component registered as '
                           '{}'.format(self._name, component, key))
        self._components[key] = component

    def add_component(self, components: Union[Callable, Iterable[Callable]]
                      ) -> Union[Callable, Iterable[Callable]]:
        """Register a class/function, or each of a list or tuple of them,
        under its own name. Returns the input, so it works as a decorator.
        """
        if isinstance(components, (list, tuple)):
            for component in components:
                self._add(component)
        else:
            self._add(components)
        return components

    def register(self, key: str) -> Callable:
        """Decorator registering a component under an explicit key."""

        def _decorator(component: Callable) -> Callable:
            self._add(component, key=key)
            return component

        return _decorator


POTENTIALS = ComponentManager(name="potentials")
MODULATIONS = ComponentManager(name="modulations")
CHECKS = ComponentManager(name="checks")
COMMANDS = ComponentManager(name="commands")
