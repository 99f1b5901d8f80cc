use spinwitness_cli::{parse_command, run};
use std::process::ExitCode;

fn main() -> ExitCode {
    match parse_command(std::env::args()) {
        Ok(plan) => match run(&plan) {
            Ok(output) => {
                print!("{}", output);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(1)
            }
        },
        Err(e) if e.help => {
            print!("{}", e.message);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let message = e.message.trim_end();
            if message.starts_with("error:") {
                eprintln!("{}", message);
            } else {
                eprintln!("error: {}", message);
            }
            ExitCode::from(2)
        }
    }
}
