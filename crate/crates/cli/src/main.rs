use std::process::ExitCode;

use gqd_cli::SEED_ENV;

fn main() -> ExitCode {
    let seed = std::env::var(SEED_ENV).ok();
    let code = gqd_cli::app::run(
        std::env::args_os(),
        seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
