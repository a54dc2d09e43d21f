use thiserror::Error;

/// Validation failures detected by the command-line layer itself.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_RUNTIME: u8 = 2;

/// Maps a failure onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<CliError>().is_some() {
            return EXIT_VALIDATION;
        }
        if let Some(e) = cause.downcast_ref::<deltareg::Error>() {
            return if e.is_runtime() { EXIT_RUNTIME } else { EXIT_VALIDATION };
        }
    }
    EXIT_RUNTIME
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let usage = anyhow::Error::from(CliError::Usage("bad".into()));
        assert_eq!(exit_code(&usage), EXIT_VALIDATION);
        let blow_up = anyhow::Error::from(deltareg::Error::BlowUp { time: 0.5 }).context("solving");
        assert_eq!(exit_code(&blow_up), EXIT_RUNTIME);
        let spec = anyhow::Error::from(deltareg::Error::InvalidKernelSpec { m: 0 });
        assert_eq!(exit_code(&spec), EXIT_VALIDATION);
        let io = anyhow::Error::from(std::io::Error::other("disk full"));
        assert_eq!(exit_code(&io), EXIT_RUNTIME);
    }
}
