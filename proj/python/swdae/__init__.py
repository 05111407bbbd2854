"""Switched descriptor systems: decoupling, reachable/unobservable sets, Gramians."""

from ._core import *  # noqa: F401,F403
from ._core import SwdaeError  # noqa: F401
