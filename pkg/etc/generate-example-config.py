from oldoind.__main__ import Runner

args = Runner.parser.parse_args(["selftest", "--config", ""])
with open("etc/oldoind.ini", "w") as f:
    Runner.parser.write_config(args, f, help=True)
