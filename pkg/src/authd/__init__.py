"""Loopback HTTP authentication service and its client"""

from .api import ApiRequest, ApiResponse, AuthAPI, create_app, parse_bind, serve, setup_routes
from .client import AuthClient, AuthResult, DemoReport, DemoStep, exploit_demo, run_exploit_demo

__all__ = [
    'ApiRequest', 'ApiResponse', 'AuthAPI', 'create_app', 'parse_bind', 'serve', 'setup_routes',
    'AuthClient', 'AuthResult', 'DemoReport', 'DemoStep', 'exploit_demo', 'run_exploit_demo',
]
