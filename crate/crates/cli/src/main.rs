use std::io::IsTerminal;

fn main() {
    let terminal = std::io::stderr().is_terminal();
    let code = spacetime_cli::run_with(std::env::args_os(), &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr(), terminal);
    std::process::exit(code);
}
