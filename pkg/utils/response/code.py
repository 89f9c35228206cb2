def exit_code():
    '''
    Exit codes of the rigid command
    '''
    code = {
        'OK': 0,
        'NEGATIVE': 1,
        'CAP_EXCEEDED': 2,
        'INPUT_ERROR': 3,
    }
    return code
