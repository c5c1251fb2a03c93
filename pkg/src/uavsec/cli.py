# cli.py - 메인 CLI 앱 및 진입점

import sys
from typing import Optional, Sequence

from cleo.application import Application
from cleo.io.inputs.argv_input import ArgvInput

from .commands import (
    BaselineCommand,
    ConfigCommand,
    SolveCommand,
    SweepPowerCommand,
    SweepTimeCommand,
    TraceCommand,
    TrajectoryCommand,
)


def get_version() -> str:
    """설치된 패키지 메타데이터에서 버전 읽기"""
    try:
        import importlib.metadata

        return importlib.metadata.version("uavsec")
    except Exception:
        return "unknown"


def create_application() -> Application:
    """명령어가 모두 등록된 Application 인스턴스 생성"""
    app = Application("uavsec", get_version())
    for command in (
        SolveCommand(),
        TraceCommand(),
        SweepTimeCommand(),
        SweepPowerCommand(),
        TrajectoryCommand(),
        BaselineCommand(),
        ConfigCommand(),
    ):
        app.add(command)
    return app


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    명령행 실행

    Returns:
        종료 코드 (0 성공, 1 설정 오류 또는 잘못된 사용법, 2 솔버 오류)
    """
    if argv is None:
        argv = sys.argv[1:]
    app = create_application()
    app.auto_exits(False)
    return app.run(ArgvInput(["uavsec", *argv]))


def main() -> int:
    """메인 진입점"""
    try:
        return cli_main()
    except KeyboardInterrupt:
        print("\nAborted by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
