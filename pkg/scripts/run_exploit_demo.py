#!/usr/bin/env python3
"""
Collision exploit soak run
Starts an in-process authd on a throwaway store and runs the register-a / login-b
demo repeatedly, once per chain, printing a pass count per chain.
"""
import asyncio
import secrets
import sys
import tempfile
from pathlib import Path

from aiohttp import web

# Add project root to sys.path
ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from src.authd import AuthClient, create_app, exploit_demo
from src.chains import LEGACY_MD5_VERSION, Pepper, get_chain, list_chains
from src.credstore import CredentialStore
from src.logger import get_logger

logger = get_logger(__name__)


async def soak(version: str, runs: int, port: int) -> int:
    spec = get_chain(version)
    pepper = Pepper(secrets.token_bytes(32))
    with tempfile.TemporaryDirectory() as workdir:
        store = CredentialStore.open(Path(workdir) / "store.txt", create=True, default_chain=version)
        runner = web.AppRunner(create_app(store, pepper, spec))
        await runner.setup()
        site = web.TCPSite(runner, "127.0.0.1", port)
        await site.start()
        try:
            passed = 0
            for i in range(runs):
                report = await exploit_demo(AuthClient(f"http://127.0.0.1:{port}"))
                if report.passed:
                    passed += 1
                else:
                    logger.debug(f"{version} run {i}: " + " ".join(report.lines()))
            return passed
        finally:
            await runner.cleanup()


def main():
    import argparse

    parser = argparse.ArgumentParser(description="Run the collision exploit demo repeatedly")
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--port", type=int, default=8732)
    parser.add_argument("--chain", action="append", help="Chain version (repeatable, default: all but md5)")
    args = parser.parse_args()

    versions = args.chain or [v for v in list_chains() if v != LEGACY_MD5_VERSION]
    for version in versions:
        passed = asyncio.run(soak(version, args.runs, args.port))
        print(f"{version}: {passed}/{args.runs} collision logins accepted")


if __name__ == "__main__":
    main()
