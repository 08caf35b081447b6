def remove_duplicates(items):
    result = []
    i = 0
    while i < len(items):
        if items[i] not in result:
            result.append(items[i])
        i = i + 1
    return result
