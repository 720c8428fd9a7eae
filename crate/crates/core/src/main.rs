use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lane_emden::cli::run(std::env::args()) as u8)
}
