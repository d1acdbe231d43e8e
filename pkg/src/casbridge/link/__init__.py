"""Client-server evaluation link: wire protocol, services, TCP servers,
and link clients."""

from .protocol import ProtocolError, Request, Response
from .service import CasService, KernelService, load_cas_rules, make_engine
from .client import (
    InProcessLink,
    Link,
    LinkDown,
    RemoteError,
    TcpLink,
    execute,
    execute_global,
    run_command_using,
)
from .server import serve_cas, serve_kernel, start_in_thread

__all__ = [name for name in dir() if not name.startswith("_")]
