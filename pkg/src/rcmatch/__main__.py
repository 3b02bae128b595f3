from rcmatch.cli import main

raise SystemExit(main())
