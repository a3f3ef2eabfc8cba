from ._regdbn import *  # noqa: F401,F403
