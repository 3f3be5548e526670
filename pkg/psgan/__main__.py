from psgan.cli import main

main()
