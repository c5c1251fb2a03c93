# commands/config_command.py - Config 관리 명령어

from cleo.commands.command import Command
from cleo.helpers import argument, option

from ..config import create_sample_config, describe_config, resolve_config
from ..constants import EXIT_CONFIG_ERROR
from ..errors import ConfigError, ScenarioError


class ConfigCommand(Command):
    """설정 관련 명령어"""

    name = "config"
    description = "Show the resolved configuration or write a sample config file"

    arguments = [argument("action", "Action to perform (show, init)", optional=True, default="show")]
    options = [option("config", "c", "Path to the YAML config document", flag=False)]

    def handle(self) -> int:
        action = self.argument("action")

        if action == "show":
            return self._show_config()
        if action == "init":
            return self._init_config()

        self.line_error(f"<error>Unknown action: {action}</error>")
        self.line("Available actions: show, init")
        return EXIT_CONFIG_ERROR

    def _show_config(self) -> int:
        """현재 설정 표시"""
        try:
            cfg, spec, source = resolve_config(self.option("config"))
        except (ConfigError, ScenarioError) as e:
            self.line_error(f"<error>Configuration error: {e}</error>")
            return EXIT_CONFIG_ERROR
        for line in describe_config(cfg, spec, source):
            self.line(line)
        return 0

    def _init_config(self) -> int:
        """설정 파일 생성"""
        try:
            config_path = create_sample_config(self.option("config"))
        except OSError as e:
            self.line_error(f"<error>Failed to create config file: {e}</error>")
            return EXIT_CONFIG_ERROR
        self.info(f"Created sample configuration file: {config_path}")
        self.line("Edit this file to customize your settings.")
        return 0
