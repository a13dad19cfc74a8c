# encoding: utf-8
"""
Registry of the properties checked by the oracle suite
"""
from contextlib import contextmanager


def register(property_class):
    from .properties import OracleProperty
    if not issubclass(property_class, OracleProperty):
        raise ValueError('Property_class must subclass OracleProperty')

    if property_class not in PROPERTIES:
        PROPERTIES.append(property_class)

    return property_class


def unregister(property_class):
    if property_class in PROPERTIES:
        PROPERTIES.remove(property_class)


@contextmanager
def loaded_properties(*property_classes):
    """
    Load property check(s) for testing purposes
    e.g.
    ```
    from . import registry
    with registry.loaded_properties(MyProperty):
        # run the suite with the property loaded
    ```
    """

    for p in property_classes:
        register(p)
    try:
        yield
    finally:
        for p in property_classes:
            unregister(p)


def get_property(name: str):
    for p in PROPERTIES:
        if p.name == name:
            return p
    raise KeyError("No property registered as {!r}".format(name))


# filled by @register when mixdescent.properties is imported
PROPERTIES = []
