"""Generic LCF-style theorem prover for a higher-order meta-logic."""

import json as _json

from ._metaproof import *  # noqa: F401,F403
from ._metaproof import MetaproofError, Session

__all__ = [name for name in dir() if not name.startswith("_")]


def request(session: Session, **command):
    """Send one protocol command as keyword arguments and decode the reply."""
    return _json.loads(session.exec(_json.dumps(command)))
