"""Stand-in for an encoder that stalls, reports progress, or fails.

Usage: long_running_tool.py {stall|progress|fail} N
"""
import sys
import time


def main():
    mode = sys.argv[1] if len(sys.argv) > 1 else "stall"
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 5

    if mode == "stall":
        print(f"Encoding, {n} s per block")
        sys.stdout.flush()
        time.sleep(n)
        print("Encoding finished")
    elif mode == "progress":
        for block in range(n):
            print(f"block {block} encoded")
            print(f"warning: block {block} clipped", file=sys.stderr)
            sys.stdout.flush()
            sys.stderr.flush()
            time.sleep(1)
    elif mode == "fail":
        print("unsupported bitrate", file=sys.stderr)
        sys.exit(n)


if __name__ == "__main__":
    main()
