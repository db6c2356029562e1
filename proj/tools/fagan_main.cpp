// Command-line surface; subcommand implementations live in cli_commands.cpp.
int fagan_cli_main(int argc, char** argv);

int main(int argc, char** argv) { return fagan_cli_main(argc, argv); }
