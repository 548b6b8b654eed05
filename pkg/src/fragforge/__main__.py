from fragforge.cli import main

main()
