import orjson

from .code import exit_code


def _report(status, group, message, data=None, errors=None):
    return {
        'status': status,
        'group': group,
        'message': message,
        'detail': message,
        'data': data,
        'errors': errors,
        'exit_code': exit_code()[group],
    }


def success_report(data=None, message='Success'):
    return _report(True, 'OK', message, data=data)


def negative_report(data=None, message='Negative verdict', errors=None):
    """A completed computation whose answer is no."""
    return _report(False, 'NEGATIVE', message, data=data, errors=errors)


def cap_error_report(message='Cap exceeded', detail=None):
    return _report(False, 'CAP_EXCEEDED', message, errors=detail)


def input_error_report(message='validation failed', errors=None):
    return _report(False, 'INPUT_ERROR', message, errors=errors)


def render_json(report) -> bytes:
    return orjson.dumps(report, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_NON_STR_KEYS)
