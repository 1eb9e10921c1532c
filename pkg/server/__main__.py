"""
Main entry point for MCP servers.

Usage: polar-sl-server [polar]
"""

import sys

from .polar_mcp import main as polar_main


def main():
    """Main entry point for MCP servers"""
    server_type = sys.argv[1].lower() if len(sys.argv) > 1 else "polar"

    if server_type == "polar":
        polar_main()
    else:
        print(f"Unknown server type: {server_type}", file=sys.stderr)
        print("Available server types: polar", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
