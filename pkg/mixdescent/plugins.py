"""
Support for interfaces that can be implemented by multiple classes.

Example: GammaTransform interface implemented by ExponentialTransform and PowerTransform,
Exporter implemented by CsvExporter, XlsxExporter, FrictionlessExporter.

Cheatsheet: To implement an interface subclass it and implement abstract methods.
The implementation is then discoverable by a slug: class name lowercased with the interface
name stripped, ie. PowerTransform -> power

  class PowerTransform(GammaTransform):
      ...

  GammaTransform.implementations()['power']
"""
import inspect
from abc import ABC
from typing import Dict, Type

__all__ = ['Interface']


def _all_subclasses(cls):
    return set(cls.__subclasses__()).union(
        [s for c in cls.__subclasses__() for s in _all_subclasses(c)])


class Interface(ABC):
    """
    Base class for custom interfaces.
    """

    # interface name stripped from implementation names; defaults to the class name
    slug_suffix = None

    @classmethod
    def implementations(cls) -> Dict[str, Type['Interface']]:
        suffix = cls.slug_suffix or cls.__name__
        implementations = {}
        for subclass in _all_subclasses(cls):
            if inspect.isabstract(subclass):
                continue

            slug = subclass.__name__
            # strip common suffix, ie. CsvExporter -> csv
            if slug.endswith(suffix):
                slug = slug[:-len(suffix)]
            slug = slug.lower()

            implementations[slug] = subclass

        return implementations

    @classmethod
    def get(cls, slug: str) -> Type['Interface']:
        implementation = cls.implementations().get(slug, None)
        if implementation is None:
            raise NotImplementedError(f"There is no '{slug}' {cls.__name__} defined")
        return implementation
