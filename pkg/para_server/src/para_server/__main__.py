"""Run the server: python -m para_server (configure via PARA_* env vars)."""
import uvicorn

from .app import create_app
from .config import ServerConfig


def main():
    config = ServerConfig.from_env()
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)


if __name__ == "__main__":
    main()
