"""
authd HTTP API

JSON endpoints over the credential store:

    POST /register       {username, password}
    POST /login          {username, password}
    POST /set_password   {username, password, new_password}
    GET  /healthz

Each request is stateless: no sessions, no cookies. Chain evaluation runs
in a bounded worker pool off the event loop.
"""

import json
from pathlib import Path
from typing import Callable, Literal, Optional, Tuple

from aiohttp import web
from pydantic import BaseModel, ConfigDict, ValidationError

from ..chains import ChainSpec, Pepper, VerificationOutcome
from ..credstore import CredentialStore
from ..errors import (
    BindError,
    DuplicateUsernameError,
    InvalidRecordError,
    MalformedLineError,
    OnionHashError,
    PasswordTooLongError,
    StoreIOError,
    UnknownUserError,
)
from ..logger import get_logger
from ..utils.queue_manager import QueueManager

logger = get_logger(__name__)

DEFAULT_MAX_BODY_BYTES = 8192
DEFAULT_HASH_WORKERS = 4

# error code -> HTTP status
_STATUS = {
    DuplicateUsernameError.code: 409,
    UnknownUserError.code: 404,
    InvalidRecordError.code: 400,
    PasswordTooLongError.code: 400,
    StoreIOError.code: 500,
    MalformedLineError.code: 500,
}


class ApiRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    action: Optional[Literal["register", "login", "set_password"]] = None
    username: str
    password: str
    new_password: Optional[str] = None


class ApiResponse(BaseModel):
    ok: bool
    error: Optional[str] = None
    chain: Optional[str] = None

    def to_response(self, status: int = 200) -> web.Response:
        return web.json_response(self.model_dump(exclude_none=True), status=status)


def _failure(error: str, status: int) -> web.Response:
    return ApiResponse(ok=False, error=error).to_response(status)


@web.middleware
async def error_middleware(request: web.Request, handler: Callable) -> web.StreamResponse:
    """Map library errors and aiohttp body limits to JSON responses"""
    try:
        return await handler(request)
    except web.HTTPRequestEntityTooLarge:
        logger.warning(f"Oversized body on {request.path}")
        return _failure("payload_too_large", 413)
    except OnionHashError as e:
        status = _STATUS.get(e.code, 400)
        if status >= 500:
            logger.error(f"{request.path} failed: {e.code}")
        return _failure(e.code, status)


class AuthAPI:
    """Request handlers bound to one store, pepper and chain"""

    def __init__(
        self,
        store: CredentialStore,
        pepper: Pepper,
        spec: ChainSpec,
        hash_workers: int = DEFAULT_HASH_WORKERS,
    ):
        self.store = store
        self.pepper = pepper
        self.spec = spec
        self.workers = QueueManager(max_concurrency=hash_workers)

    async def _parse(self, request: web.Request, action: str) -> ApiRequest:
        body = await request.read()
        try:
            payload = ApiRequest.model_validate(json.loads(body.decode("utf-8")))
        except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as e:
            raise web.HTTPBadRequest(
                text=json.dumps({"ok": False, "error": "bad_request"}), content_type="application/json"
            ) from e
        if payload.action is not None and payload.action != action:
            raise web.HTTPBadRequest(
                text=json.dumps({"ok": False, "error": "action_mismatch"}), content_type="application/json"
            )
        return payload

    async def healthz(self, request: web.Request) -> web.Response:
        return ApiResponse(ok=True, chain=self.spec.version).to_response()

    async def register(self, request: web.Request) -> web.Response:
        payload = await self._parse(request, "register")
        await self.workers.submit(self.store.create_account, payload.username, payload.password, self.spec, self.pepper)
        return ApiResponse(ok=True).to_response()

    async def login(self, request: web.Request) -> web.Response:
        payload = await self._parse(request, "login")
        outcome = await self.workers.submit(self.store.authenticate, payload.username, payload.password, self.pepper)
        if outcome is VerificationOutcome.ACCEPT:
            return ApiResponse(ok=True).to_response()
        return _failure("invalid_credentials", 401)

    def _change_password(self, username: str, password: str, new_password: str) -> bool:
        if self.store.get(username) is None:
            raise UnknownUserError(f"user '{username}' does not exist")
        if not self.store.authenticate(username, password, self.pepper).accepted:
            return False
        self.store.set_password(username, new_password, self.pepper, spec=self.spec)
        return True

    async def set_password(self, request: web.Request) -> web.Response:
        payload = await self._parse(request, "set_password")
        if payload.new_password is None:
            return _failure("bad_request", 400)
        changed = await self.workers.submit(
            self._change_password, payload.username, payload.password, payload.new_password
        )
        if not changed:
            return _failure("invalid_credentials", 401)
        return ApiResponse(ok=True).to_response()


def setup_routes(app: web.Application, api: AuthAPI) -> None:
    """Set up authd routes"""
    app.router.add_get("/healthz", api.healthz)
    app.router.add_post("/register", api.register)
    app.router.add_post("/login", api.login)
    app.router.add_post("/set_password", api.set_password)


def create_app(
    store: CredentialStore,
    pepper: Pepper,
    spec: ChainSpec,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
    hash_workers: int = DEFAULT_HASH_WORKERS,
) -> web.Application:
    app = web.Application(client_max_size=max_body_bytes, middlewares=[error_middleware])
    setup_routes(app, AuthAPI(store, pepper, spec, hash_workers=hash_workers))
    return app


def parse_bind(bind: str) -> Tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit() or not 0 < int(port) < 65536:
        raise BindError(f"bind address must be host:port, got '{bind}'")
    return host.strip("[]"), int(port)


def serve(
    bind: str,
    store_path,
    pepper: Pepper,
    spec: ChainSpec,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
    hash_workers: int = DEFAULT_HASH_WORKERS,
) -> None:
    """
    Run authd until interrupted

    Raises:
        StoreIOError: the store cannot be opened or created (server does not start)
        BindError: the address is malformed or already in use
    """
    host, port = parse_bind(bind)
    store = CredentialStore.open(
        Path(store_path), create=True, chains={spec.version: spec}, default_chain=spec.version
    )
    app = create_app(store, pepper, spec, max_body_bytes=max_body_bytes, hash_workers=hash_workers)

    async def _on_shutdown(_app: web.Application) -> None:
        logger.info(f"authd shutting down; store {store.path} holds {len(store)} records")

    app.on_shutdown.append(_on_shutdown)
    logger.info(f"authd listening on http://{host}:{port} chain={spec.version}")
    try:
        web.run_app(app, host=host, port=port, print=None)
    except OSError as e:
        raise BindError(f"cannot bind {host}:{port}: {e}") from e
