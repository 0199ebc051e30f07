"""
app.py
Command line application: synth, train, eval, lut and report jobs.
Created 17/10/2026
"""

from __future__ import annotations

import logging

from dotenv import load_dotenv

# Environment overrides must be in place before the configuration module reads them.
load_dotenv()

import click
from colorama import Fore, Style, just_fix_windows_console

from chromacst import __version__
from chromacst.base_command import LOG_FORMAT, JobCommand
from chromacst.commands import COMMANDS
from chromacst.config import LOG_LEVEL
from chromacst.errors import ChromaCstError

logger = logging.getLogger(__name__)


class ChromaCstApp():
    def __init__(self, commands: list[type[JobCommand]]) -> None:
        self.cli = click.Group("chromacst", help="Colorimetric mapping jobs for camera pipelines.")
        click.version_option(__version__, prog_name="chromacst")(self.cli)

        self._command_classes = commands
        self._commands = {}
        self._initialise_commands()

    def _initialise_commands(self) -> None:
        for command in self._command_classes:
            instance = command(self)
            self._commands[instance.name] = instance
            self.cli.add_command(instance.command())

    def run(self, args: list[str] | None = None) -> int:
        """
        Run one job.

        Returns:
            int: The process exit code. 0 on success, otherwise the exit code
                of the error class that stopped the job.
        """
        try:
            result = self.cli.main(args=args, prog_name="chromacst", standalone_mode=False)
        except ChromaCstError as e:
            logger.debug("Job failed.", exc_info=True)
            click.echo(f"{Fore.RED}{type(e).__name__}:{Style.RESET_ALL} {e}", err=True)
            for note in getattr(e, "__notes__", ()):
                click.echo(f"  {note}", err=True)
            return e.exit_code
        except click.ClickException as e:
            e.show()
            return e.exit_code
        except click.Abort:
            click.echo(f"{Fore.YELLOW}Aborted.{Style.RESET_ALL}", err=True)
            return 1
        # --help and --version exit through click with their own code.
        return result if isinstance(result, int) else 0


def main() -> None:
    just_fix_windows_console()
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    app = ChromaCstApp(COMMANDS)
    raise SystemExit(app.run())


if __name__ == "__main__":
    main()
