from qlwe.cli.router import cli


def main() -> None:
    cli(prog_name="qlwe")


if __name__ == "__main__":
    main()
