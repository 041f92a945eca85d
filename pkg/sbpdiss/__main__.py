from sbpdiss.main import main

main()
