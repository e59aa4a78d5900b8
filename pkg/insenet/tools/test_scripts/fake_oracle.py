"""Stand-in quality oracle printing a fixed MOS.

Usage: fake_oracle.py REF DEG MOS
       fake_oracle.py fail
"""
import sys


def main():
    if sys.argv[1] == "fail":
        sys.exit(1)
    print(f"Reference: {sys.argv[1]}")
    print(f"Degraded: {sys.argv[2]}")
    print(f"MOS-LQO: {sys.argv[3]}")


if __name__ == "__main__":
    main()
