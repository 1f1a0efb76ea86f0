#
# Copyright (C) 2023 Intel Corporation
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
#
import logging
import sys
from typing import Any, Dict, Mapping, MutableMapping, Optional, TextIO, Tuple

_LOGGING_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class ContextAdapter(logging.LoggerAdapter):
    """
    Adapter used by all riesz_bounds modules. It:
    1. Turns unknown keyword arguments of a logging call (e.g. n=3, alpha=1.5) into record attributes, and
    2. Adds an attribute named "extra" to each record holding all of them, including the `extra` carried by a
       RieszBoundsError when logging with exc_info=True.
    """

    logging_kwargs = {"exc_info", "stack_info", "stacklevel", "extra"}

    def __init__(self, logger: logging.Logger, context: Optional[Mapping[str, Any]] = None):
        super().__init__(logger, extra=context or {})

    def bind(self, **context: Any) -> "ContextAdapter":
        """Return an adapter for the same logger with additional static context."""
        return ContextAdapter(self.logger, {**self.extra, **context})

    def process(self, msg: Any, kwargs: MutableMapping[str, Any]) -> Tuple[Any, MutableMapping[str, Any]]:
        logging_kwargs: Dict[str, Any] = {}
        context: Dict[str, Any] = {}
        for k, v in kwargs.items():
            if k in self.logging_kwargs:
                logging_kwargs[k] = v
            else:
                context[k] = v

        extra: Dict[str, Any] = {**self.extra, **logging_kwargs.get("extra", {}), **context}

        if logging_kwargs.get("exc_info") is True:
            exc = sys.exc_info()[1]
            if isinstance(getattr(exc, "extra", None), dict):
                # the exception's context wins over the call site's
                extra = {**extra, **getattr(exc, "extra")}

        logging_kwargs["extra"] = {**extra, "extra": extra}
        return msg, logging_kwargs


def get_logger(name: str, **context: Any) -> ContextAdapter:
    return ContextAdapter(logging.getLogger(name), context)


def configure_cli_logging(verbosity: int, stream: TextIO = None) -> logging.Logger:
    """Attach a single stream handler to the package logger; verbosity 0/1/2+ maps to WARNING/INFO/DEBUG."""
    root = logging.getLogger("riesz_bounds")
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter(_LOGGING_FORMAT))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbosity >= 2 else logging.INFO if verbosity == 1 else logging.WARNING)
    root.propagate = False
    return root
