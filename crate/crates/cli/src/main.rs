mod app;
mod cache;
mod pretty;
mod report;

use clap::Parser;

fn main() {
    let cli = app::Cli::parse();
    match app::run(&cli) {
        Ok(report) => {
            print!("{}", app::format_report(&cli, &report));
            std::process::exit(app::status(&cli, &report));
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
