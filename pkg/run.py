import os
import sys

from src.cli import main as cli_main


def main():
    """Startup script: forwards arguments to the simulator CLI."""
    scene = os.environ.get("FDA_SCENE")
    argv = sys.argv[1:] or ["selftest"]

    # A scene from the environment applies unless one is given explicitly
    if scene and "--scene" not in argv:
        if not os.path.exists(scene):
            print(f"ERROR: Scene file {scene} not found!")
            sys.exit(2)
        argv += ["--scene", scene]

    print(f"Command: fda-stap {' '.join(argv)}")
    sys.exit(cli_main(argv))


if __name__ == "__main__":
    main()
