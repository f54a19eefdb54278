use clap::error::ErrorKind;
use clap::Parser;
use oger_cli::args::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = oger_cli::run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
