use clap::Parser;
use trifree_cli::commands::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = run(cli, &mut stdout.lock());
    std::process::exit(code);
}
